#pragma once

// Genericity scans and full Morse reports, emitted as JSON lines or CSV.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "trilaman/checks.hpp"
#include "trilaman/enumeration.hpp"
#include "trilaman/spec_file.hpp"

namespace trilaman {

nlohmann::json to_json(const InertiaTriple& t);
nlohmann::json to_json(const CanonicalPartition& p);
nlohmann::json to_json(const CriticalOrbitRecord& o);
nlohmann::json to_json(const IndexFormulaReport& r);
nlohmann::json to_json(const InertiaFormulaReport& r);

/// Parameter ranges for random ensembles; every edge draws independently.
struct SamplerSpec {
  std::string family = "S";  // "S" or "power"
  double k_lo = 0.5, k_hi = 2.0;
  double c_lo = 0.25, c_hi = 4.0;
  double alpha_lo = 0.5, alpha_hi = 2.0;

  /// One law per edge, drawn from mt19937_64 seeded with `seed`.
  std::vector<LawSpec> draw(std::size_t edges, std::uint64_t seed) const;
};

struct ScanOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
  Tolerances tolerances;
  bool timing = true;  // false omits wall time so reports are byte-stable
  /// Extra ensembles evaluated after the random ones.
  std::vector<std::vector<LawSpec>> injected;
};

struct SampleResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;  // per-sample seed; unused for injected ensembles
  bool injected = false;
  std::vector<LawSpec> laws;
  std::size_t orbits = 0;
  std::size_t degenerate = 0;
  std::size_t repaired = 0;
  double max_repair_shift = 0.0;  // largest movement of a repaired orbit
  std::vector<std::string> errors;
};

struct ScanReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t orbit_bound = 0;  // 3^(N-2)
  Tolerances tolerances;
  std::vector<SampleResult> per_sample;  // sorted by index
  std::size_t orbit_total = 0;
  std::size_t degenerate = 0;
  std::size_t repaired = 0;
  bool bound_respected = true;
  std::optional<double> wall_time;

  bool passed() const { return degenerate == 0 && bound_respected; }
  std::vector<std::string> json_lines() const;
  std::string csv() const;
};

/// Repaired when the perturbed system has an orbit with the same case vector,
/// nondegenerate and within `shift_tol` of the original.
inline constexpr double kRepairShiftTol = 1e-10;

ScanReport run_genericity_scan(const TLGraph& graph, const SamplerSpec& sampler,
                               const ScanOptions& options);

struct MorseReport {
  std::vector<nlohmann::json> records;  // line_orbit, subsystem, equilibrium, verdict
  std::size_t line_orbits = 0;
  std::size_t equilibria = 0;
  std::size_t degenerate = 0;
  std::size_t violations = 0;   // failed index or inertia-jump checks
  std::size_t flow_failures = 0;
  bool passed() const { return degenerate == 0 && violations == 0; }

  std::vector<std::string> json_lines() const;
  std::string csv() const;
};

/// Positions within this distance (canonical forms) are the same orbit.
inline constexpr double kOrbitMatchTol = 1e-6;

MorseReport morse_report(const SystemSpec& spec);

}  // namespace trilaman
