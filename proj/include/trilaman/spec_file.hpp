#pragma once

// JSON system description. Vertex ids in files are 1-based; everything in
// memory is 0-based. See README for the schema.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trilaman/dynamics.hpp"
#include "trilaman/inertia.hpp"

namespace trilaman {

inline constexpr int kSpecSchemaVersion = 1;

struct Tolerances {
  double collinear = kDefaultCollinearTol;
  double zero_eig = kDefaultZeroEigTol;
  double residual = kDefaultResidualTol;
  double flow = 1e-10;
};

struct RandomInitial {
  int count = 0;
  std::uint64_t seed = 0;
  double box = 2.0;  // points uniform in [-box, box]^2
};

struct LawSpec {
  std::string family = "S";  // "S" or "power"
  double k = 1.0;
  double c = 1.0;
  double alpha = 1.0;
  std::vector<PerturbationBump> bumps;

  Law build() const;
};

struct SystemSpec {
  TLGraph graph;
  std::vector<LawSpec> law_specs;  // aligned with graph.edges()
  std::vector<Configuration> initial_configurations;
  RandomInitial random_initial;
  Tolerances tolerances;

  RMASystem system() const;
  /// Supplied initial configurations followed by the seeded random ones.
  std::vector<Configuration> all_initial_configurations() const;
};

/// Throws SpecError, or the graph's own errors wrapped as SpecError.
SystemSpec parse_spec(const nlohmann::json& doc);
SystemSpec parse_spec_text(const std::string& text);
/// "-" reads standard input.
SystemSpec load_spec(const std::string& path);

nlohmann::json to_json(const SystemSpec& spec);
nlohmann::json to_json(const LawSpec& law);
LawSpec law_spec_from_json(const nlohmann::json& j);

/// 1-based [u, v].
nlohmann::json edge_to_json(Edge e);
nlohmann::json configuration_to_json(const Configuration& c);

}  // namespace trilaman
