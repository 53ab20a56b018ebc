// Command-line front end. Exit codes: 0 pass, 2 degenerate orbit or failed
// check, 1 error.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "trilaman/checks.hpp"
#include "trilaman/error.hpp"
#include "trilaman/report.hpp"
#include "trilaman/spec_file.hpp"

using namespace trilaman;
using nlohmann::json;

namespace {

struct Common {
  std::string spec_path;
  std::optional<double> tol_collinear;
  std::optional<double> tol_zero_eig;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  int workers = 1;
  std::string out;
  std::string format = "jsonl";
  bool no_timing = false;
  std::string family = "S";
  std::vector<std::string> inject;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("spec", c.spec_path, "System spec file ('-' for stdin)")->required();
  sub->add_option("--tol-collinear", c.tol_collinear, "Collinearity tolerance");
  sub->add_option("--tol-zero-eig", c.tol_zero_eig, "Relative zero-eigenvalue tolerance");
  sub->add_option("--seed", c.seed, "Base random seed");
  sub->add_option("--samples", c.samples, "Number of sampled ensembles");
  sub->add_option("--workers", c.workers, "Worker threads");
  sub->add_option("--out", c.out, "Output file (default stdout)");
  sub->add_option("--format", c.format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
}

SystemSpec load(const Common& c) {
  SystemSpec spec = load_spec(c.spec_path);
  if (c.tol_collinear) spec.tolerances.collinear = *c.tol_collinear;
  if (c.tol_zero_eig) spec.tolerances.zero_eig = *c.tol_zero_eig;
  return spec;
}

CheckOptions check_options(const Tolerances& t) {
  CheckOptions o;
  o.col_tol = t.collinear;
  o.zero_tol = t.zero_eig;
  o.residual_tol = t.residual;
  return o;
}

EnumerationOptions enumeration_options(const Tolerances& t) {
  EnumerationOptions o;
  o.col_tol = t.collinear;
  o.zero_tol = t.zero_eig;
  o.residual_tol = t.residual;
  return o;
}

void emit(const Common& c, const std::vector<json>& records, const std::string& csv = {}) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) throw Error(ErrorCode::SpecError, "cannot write '" + c.out + "'");
    os = &file;
  }
  if (c.format == "csv" && !csv.empty()) {
    *os << csv;
  } else {
    for (const auto& r : records) *os << r.dump() << '\n';
  }
}

std::vector<Configuration> initial_or_fail(const SystemSpec& spec) {
  auto starts = spec.all_initial_configurations();
  if (starts.empty())
    throw Error(ErrorCode::SpecError, "spec provides no initial configurations");
  return starts;
}

// Flow then Newton; nullopt when no equilibrium is reached.
std::optional<Configuration> settle(const RMASystem& system, const Configuration& start,
                                    const Tolerances& t, json& record) {
  const SettleResult sr = settle_equilibrium(system, start, std::max(t.flow, 1e-8), t.residual);
  record["flow_status"] = to_string(sr.flow.status);
  if (sr.gauge_singular) record["gauge_singular"] = true;
  if (!sr.equilibrium) return std::nullopt;
  return canonical_orbit_form(system.graph(), *sr.equilibrium);
}

int run_validate(const Common& c) {
  const SystemSpec spec = load(c);
  const RMASystem system = spec.system();
  json edges = json::array();
  for (const auto& e : system.graph().edges()) edges.push_back(edge_to_json(e));
  emit(c, {{{"kind", "spec"},
            {"vertices", system.n()},
            {"edges", edges},
            {"admissible", system.admissible()},
            {"initial_configurations", spec.all_initial_configurations().size()}}});
  return 0;
}

int run_partition(const Common& c) {
  const SystemSpec spec = load(c);
  std::vector<json> out;
  const auto starts = initial_or_fail(spec);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const CanonicalPartition p =
        canonical_partition(spec.graph, starts[i], spec.tolerances.collinear);
    out.push_back({{"kind", "partition"}, {"config", i}, {"parts", to_json(p)}});
  }
  emit(c, out);
  return 0;
}

int run_inertia(const Common& c) {
  const SystemSpec spec = load(c);
  const RMASystem system = spec.system();
  std::vector<json> out;
  int code = 0;
  const auto starts = initial_or_fail(spec);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const InertiaTriple t = inertia(paper_hessian(system, starts[i]), spec.tolerances.zero_eig);
    const double r = residual(system, starts[i]);
    out.push_back({{"kind", "inertia"},
                   {"config", i},
                   {"residual", r},
                   {"equilibrium", r <= spec.tolerances.residual},
                   {"inertia", to_json(t)}});
    if (r <= spec.tolerances.residual && t.n_zero != 3) code = 2;
  }
  emit(c, out);
  return code;
}

int run_flow(const Common& c) {
  const SystemSpec spec = load(c);
  const RMASystem system = spec.system();
  FlowOptions fo;
  fo.tol = spec.tolerances.flow;
  std::vector<json> out;
  int code = 0;
  const auto starts = initial_or_fail(spec);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const FlowResult fr = flow(system, starts[i], fo);
    out.push_back({{"kind", "flow"},
                   {"run", i},
                   {"status", to_string(fr.status)},
                   {"residual", fr.residual},
                   {"time", fr.time},
                   {"accepted_steps", fr.accepted_steps},
                   {"potential_start", fr.potential_start},
                   {"potential_end", fr.potential_end},
                   {"potential_monotone", fr.potential_monotone},
                   {"final_config", configuration_to_json(fr.final_config)}});
    if (!fr.converged()) code = 1;
  }
  emit(c, out);
  return code;
}

int run_line_eq(const Common& c) {
  const SystemSpec spec = load(c);
  const RMASystem system = spec.system();
  const EnumerationResult res =
      enumerate_line_equilibria(system, enumeration_options(spec.tolerances));
  std::vector<json> out;
  int code = 0;
  for (std::size_t i = 0; i < res.orbits.size(); ++i) {
    json j = to_json(res.orbits[i]);
    j["kind"] = "line_orbit";
    j["index"] = i;
    out.push_back(std::move(j));
    if (!res.orbits[i].nondegenerate) code = 2;
  }
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  emit(c, out);
  return code;
}

int run_check_index(const Common& c) {
  const SystemSpec spec = load(c);
  const RMASystem system = spec.system();
  const CheckOptions co = check_options(spec.tolerances);
  std::vector<json> out;
  int code = 0;
  const EnumerationResult res =
      enumerate_line_equilibria(system, enumeration_options(spec.tolerances));
  for (std::size_t i = 0; i < res.orbits.size(); ++i) {
    const IndexFormulaReport r = check_index_formula(system, res.orbits[i].config, co);
    json j = to_json(r);
    j["kind"] = "index_formula";
    j["source"] = "line_orbit";
    j["index"] = i;
    out.push_back(std::move(j));
    if (!r.holds()) code = 2;
  }
  const auto starts = spec.all_initial_configurations();
  for (std::size_t i = 0; i < starts.size(); ++i) {
    json j{{"kind", "index_formula"}, {"source", "flow"}, {"index", i}};
    const auto eq = settle(system, starts[i], spec.tolerances, j);
    if (!eq) {
      out.push_back(std::move(j));
      continue;
    }
    const IndexFormulaReport r = check_index_formula(system, *eq, co);
    j.update(to_json(r));
    j["config"] = configuration_to_json(*eq);
    out.push_back(std::move(j));
    if (!r.holds()) code = 2;
  }
  emit(c, out);
  return code;
}

int run_check_inertia(const Common& c) {
  const SystemSpec spec = load(c);
  const RMASystem system = spec.system();
  const CheckOptions co = check_options(spec.tolerances);
  const EnumerationResult res =
      enumerate_line_equilibria(system, enumeration_options(spec.tolerances));
  std::vector<json> out;
  int code = 0;
  for (std::size_t i = 0; i < res.orbits.size(); ++i) {
    const InertiaFormulaReport r = check_inertia_formula(system, res.orbits[i].config, co);
    json j = to_json(r);
    j["kind"] = "inertia_formula";
    j["index"] = i;
    out.push_back(std::move(j));
    if (!r.holds || !r.congruence_holds) code = 2;
  }
  emit(c, out);
  return code;
}

int run_scan(const Common& c) {
  const SystemSpec spec = load(c);
  SamplerSpec sampler;
  sampler.family = c.family;
  ScanOptions so;
  so.samples = c.samples;
  so.seed = c.seed;
  so.workers = c.workers;
  so.tolerances = spec.tolerances;
  so.timing = !c.no_timing;
  for (const auto& path : c.inject) so.injected.push_back(load_spec(path).law_specs);
  const ScanReport rep = run_genericity_scan(spec.graph, sampler, so);
  std::vector<json> out;
  for (const auto& line : rep.json_lines()) out.push_back(json::parse(line));
  emit(c, out, rep.csv());
  return rep.passed() ? 0 : 2;
}

int run_report(const Common& c) {
  const SystemSpec spec = load(c);
  const MorseReport rep = morse_report(spec);
  emit(c, rep.records, rep.csv());
  return rep.passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibria and Morse indices of triangulated Laman formations"};
  app.require_subcommand(1);
  Common c;

  struct Verb {
    CLI::App* app;
    int (*run)(const Common&);
  };
  std::vector<Verb> verbs;
  auto verb = [&](CLI::App* parent, const char* name, const char* help, int (*run)(const Common&)) {
    CLI::App* sub = parent->add_subcommand(name, help);
    add_common(sub, c);
    verbs.push_back({sub, run});
    return sub;
  };

  verb(&app, "validate", "Parse a spec and report the system", run_validate);
  verb(&app, "partition", "Canonical partition of each initial configuration", run_partition);
  verb(&app, "inertia", "Hessian inertia at each initial configuration", run_inertia);
  verb(&app, "flow", "Integrate the gradient flow from each initial configuration", run_flow);
  verb(&app, "line-eq", "Enumerate collinear equilibria", run_line_eq);
  CLI::App* check = app.add_subcommand("check", "Numerical checks");
  check->require_subcommand(1);
  verb(check, "index-formula", "Index splitting over the canonical partition", run_check_index);
  verb(check, "inertia-formula", "Inertia jump of the last Henneberg step", run_check_inertia);
  CLI::App* scan = verb(&app, "scan", "Genericity scan over random ensembles", run_scan);
  scan->add_flag("--no-timing", c.no_timing, "Omit wall time for byte-stable output");
  scan->add_option("--family", c.family, "Sampled law family")
      ->check(CLI::IsMember({"S", "power"}));
  scan->add_option("--inject", c.inject, "Spec files whose laws are appended as ensembles");
  verb(&app, "report", "Full Morse report", run_report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (const auto& v : verbs)
      if (v.app->parsed()) return v.run(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
