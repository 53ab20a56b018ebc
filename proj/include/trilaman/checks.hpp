#pragma once

// Numerical checks of the index-splitting and inertia-jump laws, the
// degenerate-orbit repair, and the subgraph nondegeneracy audit.

#include <vector>

#include "trilaman/dynamics.hpp"
#include "trilaman/enumeration.hpp"
#include "trilaman/inertia.hpp"
#include "trilaman/partition.hpp"

namespace trilaman {

struct CheckOptions {
  double col_tol = kDefaultCollinearTol;
  double zero_tol = kDefaultZeroEigTol;
  double residual_tol = kDefaultResidualTol;
};

struct PartReport {
  std::vector<Edge> edges;
  std::vector<VertexId> vertices;  // parent ids
  InertiaTriple inertia;
  double residual = 0.0;  // of the restricted configuration in the subsystem
  bool on_line = false;
};

struct IndexFormulaReport {
  CanonicalPartition partition;
  InertiaTriple full;
  std::vector<PartReport> parts;
  int sum_plus = 0;
  int sum_minus = 0;
  int implied_n_zero = 0;  // 2N - sum_plus - sum_minus
  bool plus_matches = false;
  bool minus_matches = false;
  bool parts_nondegenerate = false;
  /// Nondegenerate parts imply a nondegenerate orbit.
  bool implication_holds = false;

  bool holds() const {
    return plus_matches && minus_matches && implied_n_zero == full.n_zero && implication_holds;
  }
};

/// Throws NotEquilibrium when the residual exceeds options.residual_tol.
IndexFormulaReport check_index_formula(const RMASystem& system, const Configuration& config,
                                       const CheckOptions& options = {});

struct InertiaFormulaReport {
  VertexId removed = 0;
  VertexId parent_first = 0;
  VertexId parent_second = 0;
  ReductionCase realized = ReductionCase::Between;
  InertiaTriple full;
  InertiaTriple reduced;
  InertiaTriple difference;  // full - reduced
  InertiaTriple predicted;   // sgn(-f_sum) + sgn(-ftp_sum)
  double f_sum = 0.0;
  double ftp_sum = 0.0;
  bool holds = false;

  // Explicit congruences of the transverse block F and the longitudinal
  // block dF~ with the reduced blocks extended by the removed vertex.
  InertiaTriple f_block_direct, f_block_congruent;
  InertiaTriple df_block_direct, df_block_congruent;
  double f_offdiag = 0.0;    // max |off-diagonal| of Q^T F Q, relative
  double df_offdiag = 0.0;
  double f_diag_error = 0.0;  // max deviation of the diagonal from the prediction, relative
  double df_diag_error = 0.0;
  bool congruence_holds = false;
};

/// Line equilibria only. Throws NotEquilibrium or NotCollinear.
InertiaFormulaReport check_inertia_formula(const RMASystem& system, const Configuration& config,
                                           const CheckOptions& options = {});

struct AppliedBump {
  Edge edge;
  PerturbationBump bump;
};

struct RepairOptions {
  double eta = 0.0;             // bump height; 0 picks one automatically
  double width_fraction = 0.25; // bump half-width relative to the edge length
  double zero_tol = kDefaultZeroEigTol;
  double residual_tol = kDefaultResidualTol;
};

struct RepairResult {
  RMASystem system;
  std::vector<AppliedBump> bumps;
  double eta = 0.0;
  double residual_after = 0.0;
  InertiaTriple inertia_after;
};

/// Adds flat-topped bumps to the three laws of every degenerate step so
/// that the orbit stays an equilibrium and becomes nondegenerate. Throws
/// NotRepairable when no step is degenerate or the repair fails.
RepairResult repair_degenerate(const RMASystem& system, const CriticalOrbitRecord& orbit,
                               const RepairOptions& options = {});

struct SubgraphAudit {
  std::vector<Edge> edges;
  std::size_t orbits = 0;
  std::size_t degenerate = 0;
};

/// Line equilibria of every TLG subgraph's subsystem. The system's planar
/// critical orbits are all nondegenerate when every entry has degenerate == 0.
std::vector<SubgraphAudit> audit_subgraphs(const RMASystem& system,
                                           const EnumerationOptions& options = {});

}  // namespace trilaman
