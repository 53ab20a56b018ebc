import json
import math
import pathlib

import numpy as np
import pytest

import trilaman as tl

SPECS = pathlib.Path(__file__).resolve().parents[2] / "specs"


def triangle_system():
    g = tl.build_tlg((0, 1), [(2, (0, 1))])
    return tl.RMASystem.uniform(g, tl.Law.stretch(1.0, 1.0))


def test_law_and_rest_length():
    law = tl.Law.stretch(1.0, 4.0)
    assert law.class_f()
    assert tl.rest_length(law) == pytest.approx(2.0)
    f, ft, ftp = law.eval(1.0)
    assert ft == pytest.approx(-3.0)
    assert ftp == pytest.approx(5.0)


def test_graph_and_errors():
    g = tl.recognize_tlg([(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
    assert g.n == 4
    with pytest.raises(tl.Error):
        tl.recognize_tlg([(0, 1), (1, 2), (2, 3), (3, 0)])


def test_enumeration_triangle():
    orbits = tl.enumerate_line_equilibria(triangle_system())
    assert len(orbits) == 3
    for o in orbits:
        assert (o["inertia"]["n_plus"], o["inertia"]["n_zero"], o["inertia"]["n_minus"]) == (1, 3, 2)
        d = sorted(x["d"] for x in o["distances"])
        assert d[0] == pytest.approx(1 / math.sqrt(2), abs=1e-9)


def test_equilateral_index_formula_and_hessian():
    s = triangle_system()
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
    assert tl.residual(s, pts) < 1e-12
    h = tl.paper_hessian(s, pts)
    assert h.shape == (6, 6)
    assert tl.inertia(h) == (0, 3, 3)
    rep = tl.check_index_formula(s, pts)
    assert rep["holds"]
    assert len(rep["parts"]) == 3


def test_flow_converges():
    s = triangle_system()
    rng = np.random.default_rng(3)
    out = tl.flow(s, rng.uniform(-2, 2, size=(3, 2)))
    assert out["status"] == "converged"
    assert out["potential_monotone"]
    assert out["residual"] <= 1e-10


def test_degenerate_repair():
    text = (SPECS / "degenerate_triangle.json").read_text()
    s = tl.load_spec_system(text)
    before = tl.enumerate_line_equilibria(s)
    assert sum(not o["nondegenerate"] for o in before) == 1
    fixed = tl.repair_degenerate_orbits(s)
    after = tl.enumerate_line_equilibria(fixed)
    assert all(o["nondegenerate"] for o in after)


def test_reports():
    text = (SPECS / "triangle.json").read_text()
    records = tl.morse_report(text)
    assert records[-1]["kind"] == "verdict"
    assert records[-1]["pass"]
    scan = tl.run_genericity_scan(text, samples=10, seed=2)
    assert scan[-1]["kind"] == "scan_summary"
    assert scan[-1]["degenerate"] == 0
    assert json.dumps(scan)
