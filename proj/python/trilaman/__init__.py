"""Equilibria and Morse indices of triangulated Laman formations.

Vertex ids are 0-based here; JSON spec files and reports use 1-based ids.
"""

import json as _json

from ._core import (
    Error,
    Law,
    ReductionCase,
    RMASystem,
    TLGraph,
    build_tlg,
    canonical_partition,
    flow,
    inertia,
    lift_reduced_law,
    load_spec_system,
    paper_hessian,
    potential,
    recognize_tlg,
    reduced_law,
    repair_degenerate_orbits,
    residual,
    rest_length,
    vector_field,
    virtual_interaction,
)
from . import _core

__all__ = [
    "Error",
    "Law",
    "ReductionCase",
    "RMASystem",
    "TLGraph",
    "build_tlg",
    "canonical_partition",
    "check_index_formula",
    "check_inertia_formula",
    "enumerate_line_equilibria",
    "flow",
    "inertia",
    "lift_reduced_law",
    "load_spec_system",
    "morse_report",
    "paper_hessian",
    "potential",
    "recognize_tlg",
    "reduced_law",
    "repair_degenerate_orbits",
    "residual",
    "rest_length",
    "run_genericity_scan",
    "vector_field",
    "virtual_interaction",
]


def enumerate_line_equilibria(system):
    """Collinear equilibria as report dictionaries, sorted by case vector."""
    return _json.loads(_core._enumerate_line_equilibria(system))


def check_index_formula(system, points):
    return _json.loads(_core._check_index_formula(system, points))


def check_inertia_formula(system, points):
    return _json.loads(_core._check_inertia_formula(system, points))


def morse_report(spec_text):
    """Full report for a JSON spec document given as text."""
    return [_json.loads(line) for line in _core._morse_report(spec_text)]


def run_genericity_scan(spec_text, samples, seed=0, workers=1, family="S"):
    return [_json.loads(line) for line in _core._scan(spec_text, samples, seed, workers, family)]
