#pragma once

// Enumeration of collinear equilibria by recursive vertex removal: remove
// the last vertex of the construction, branch over its three placements
// relative to its parents, and fold it into a virtual interaction on the
// parent edge. The base pair sits at its rest length; positions are then
// recovered forward.

#include <optional>
#include <string>
#include <vector>

#include "trilaman/dynamics.hpp"
#include "trilaman/inertia.hpp"
#include "trilaman/law.hpp"
#include "trilaman/partition.hpp"

namespace trilaman {

/// Data of one Henneberg step at a line equilibrium, measured with the laws
/// in force at that reduction level.
struct ReductionStepRecord {
  VertexId vertex = 0;
  VertexId parent_first = 0;
  VertexId parent_second = 0;
  ReductionCase reduction_case = ReductionCase::Between;
  double d_first = 0.0;    // |x_v - x_first|
  double d_second = 0.0;   // |x_v - x_second|
  double d_parents = 0.0;  // |x_first - x_second|
  double f_first = 0.0;
  double f_second = 0.0;
  double ftp_first = 0.0;
  double ftp_second = 0.0;

  double f_sum() const { return f_first + f_second; }
  double ftp_sum() const { return ftp_first + ftp_second; }
  /// sgn(-f_sum) + sgn(-ftp_sum); the inertia added by this step.
  InertiaTriple predicted_jump(double zero_tol = kDefaultZeroEigTol) const;
  /// True when f_sum vanishes.
  bool degenerate(double zero_tol = kDefaultZeroEigTol) const;
};

struct CriticalOrbitRecord {
  Configuration config;  // canonical form: base edge from the origin along +a
  std::vector<ReductionCase> case_vector;  // one entry per Henneberg step
  std::vector<ReductionStepRecord> steps;  // in step order
  double residual = 0.0;
  InertiaTriple inertia;
  bool nondegenerate = false;  // n_zero == 3
  CanonicalPartition partition;
  std::vector<InertiaTriple> part_inertia;
  std::vector<Edge> edges;        // graph edges
  std::vector<double> distances;  // aligned with `edges`

  std::string case_string() const;  // e.g. "between,left_outside"
};

struct EnumerationOptions {
  double residual_tol = kDefaultResidualTol;
  double col_tol = kDefaultCollinearTol;
  double zero_tol = kDefaultZeroEigTol;
  bool polish = true;  // Newton on the a-coordinates after back-substitution
};

struct EnumerationResult {
  std::vector<CriticalOrbitRecord> orbits;  // sorted by case vector
  std::vector<std::string> warnings;
  std::size_t branches = 0;  // case vectors tried
};

EnumerationResult enumerate_line_equilibria(const RMASystem& system,
                                            const EnumerationOptions& options = {});

/// Laws of the system remaining after removing the last vertex, whose
/// parent edge carries f*_pq = f_pq + g_pq for placement `c`.
RMASystem reduce_last_vertex(const RMASystem& system, ReductionCase c,
                             std::vector<VertexId>* vertices = nullptr);

/// Placement of `v` relative to parents p (first) and q (second) on the a-axis.
std::optional<ReductionCase> realized_case(double a_v, double a_p, double a_q,
                                           double margin = 0.0);

}  // namespace trilaman
