#include "trilaman/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "trilaman/error.hpp"

namespace trilaman {

using nlohmann::json;

json to_json(const InertiaTriple& t) {
  return {{"n_plus", t.n_plus}, {"n_zero", t.n_zero}, {"n_minus", t.n_minus}};
}

namespace {

json edges_json(const std::vector<Edge>& edges) {
  json out = json::array();
  for (const auto& e : edges) out.push_back(edge_to_json(e));
  return out;
}

json vertices_json(const std::vector<VertexId>& vs) {
  json out = json::array();
  for (VertexId v : vs) out.push_back(v + 1);
  return out;
}

}  // namespace

json to_json(const CanonicalPartition& p) {
  json out = json::array();
  for (const auto& part : p.parts) out.push_back(edges_json(part.edges));
  return out;
}

json to_json(const CriticalOrbitRecord& o) {
  json cases = json::array();
  for (auto c : o.case_vector) cases.push_back(to_string(c));
  json steps = json::array();
  for (const auto& s : o.steps)
    steps.push_back({{"vertex", s.vertex + 1},
                     {"parents", json::array({s.parent_first + 1, s.parent_second + 1})},
                     {"case", to_string(s.reduction_case)},
                     {"d_first", s.d_first},
                     {"d_second", s.d_second},
                     {"d_parents", s.d_parents},
                     {"f_sum", s.f_sum()},
                     {"ftp_sum", s.ftp_sum()},
                     {"predicted_jump", to_json(s.predicted_jump())},
                     {"degenerate", s.degenerate()}});
  json parts = json::array();
  for (const auto& t : o.part_inertia) parts.push_back(to_json(t));
  json distances = json::array();
  for (std::size_t k = 0; k < o.edges.size(); ++k)
    distances.push_back({{"edge", edge_to_json(o.edges[k])}, {"d", o.distances[k]}});
  return {{"cases", cases},
          {"distances", distances},
          {"config", configuration_to_json(o.config)},
          {"residual", o.residual},
          {"inertia", to_json(o.inertia)},
          {"nondegenerate", o.nondegenerate},
          {"partition", to_json(o.partition)},
          {"part_inertia", parts},
          {"steps", steps}};
}

json to_json(const IndexFormulaReport& r) {
  json parts = json::array();
  for (const auto& p : r.parts)
    parts.push_back({{"edges", edges_json(p.edges)},
                     {"vertices", vertices_json(p.vertices)},
                     {"inertia", to_json(p.inertia)},
                     {"residual", p.residual},
                     {"on_line", p.on_line}});
  return {{"full", to_json(r.full)},
          {"parts", parts},
          {"sum_plus", r.sum_plus},
          {"sum_minus", r.sum_minus},
          {"implied_n_zero", r.implied_n_zero},
          {"parts_nondegenerate", r.parts_nondegenerate},
          {"holds", r.holds()}};
}

json to_json(const InertiaFormulaReport& r) {
  return {{"removed", r.removed + 1},
          {"parents", json::array({r.parent_first + 1, r.parent_second + 1})},
          {"case", to_string(r.realized)},
          {"full", to_json(r.full)},
          {"reduced", to_json(r.reduced)},
          {"difference", to_json(r.difference)},
          {"predicted", to_json(r.predicted)},
          {"f_sum", r.f_sum},
          {"ftp_sum", r.ftp_sum},
          {"holds", r.holds},
          {"congruence_holds", r.congruence_holds}};
}

// ---------------------------------------------------------------- scan

std::vector<LawSpec> SamplerSpec::draw(std::size_t edges, std::uint64_t seed) const {
  if (family != "S" && family != "power")
    throw Error(ErrorCode::SpecError, "unknown sampler family '" + family + "'");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uk(k_lo, k_hi), uc(c_lo, c_hi), ua(alpha_lo, alpha_hi);
  std::vector<LawSpec> out(edges);
  for (auto& l : out) {
    l.family = family;
    l.k = uk(rng);
    l.c = uc(rng);
    if (family == "power") l.alpha = ua(rng);
  }
  return out;
}

namespace {

EnumerationOptions enumeration_options(const Tolerances& t) {
  EnumerationOptions o;
  o.residual_tol = t.residual;
  o.col_tol = t.collinear;
  o.zero_tol = t.zero_eig;
  return o;
}

RMASystem build_system(const TLGraph& graph, const std::vector<LawSpec>& laws) {
  std::vector<Law> built;
  for (const auto& l : laws) built.push_back(l.build());
  return RMASystem(graph, std::move(built));
}

void evaluate_sample(const TLGraph& graph, const Tolerances& tol, SampleResult& out) {
  try {
    const RMASystem system = build_system(graph, out.laws);
    const EnumerationOptions eo = enumeration_options(tol);
    const EnumerationResult res = enumerate_line_equilibria(system, eo);
    out.orbits = res.orbits.size();
    for (const auto& orbit : res.orbits) {
      if (orbit.nondegenerate) continue;
      ++out.degenerate;
      try {
        RepairOptions ro;
        ro.zero_tol = tol.zero_eig;
        ro.residual_tol = tol.residual;
        const RepairResult rr = repair_degenerate(system, orbit, ro);
        const EnumerationResult after = enumerate_line_equilibria(rr.system, eo);
        for (const auto& o2 : after.orbits) {
          if (o2.case_vector != orbit.case_vector) continue;
          const double shift =
              (o2.config.coordinates() - orbit.config.coordinates()).lpNorm<Eigen::Infinity>();
          out.max_repair_shift = std::max(out.max_repair_shift, shift);
          if (o2.nondegenerate && shift <= kRepairShiftTol) ++out.repaired;
        }
      } catch (const Error& e) {
        out.errors.push_back(std::string("repair failed: ") + e.what());
      }
    }
  } catch (const Error& e) {
    out.errors.push_back(e.what());
  }
}

}  // namespace

ScanReport run_genericity_scan(const TLGraph& graph, const SamplerSpec& sampler,
                               const ScanOptions& options) {
  if (options.samples < 1 && options.injected.empty())
    throw Error(ErrorCode::SpecError, "a scan needs at least one sample");
  const auto start = std::chrono::steady_clock::now();

  ScanReport rep;
  rep.samples = options.samples + options.injected.size();
  rep.seed = options.seed;
  rep.tolerances = options.tolerances;
  rep.orbit_bound = 1;
  for (std::size_t k = 0; k < graph.steps().size(); ++k) rep.orbit_bound *= 3;

  rep.per_sample.resize(rep.samples);
  for (std::size_t i = 0; i < rep.samples; ++i) {
    SampleResult& s = rep.per_sample[i];
    s.index = i;
    if (i < options.samples) {
      s.seed = options.seed + i;
      s.laws = sampler.draw(graph.edge_count(), s.seed);
    } else {
      s.injected = true;
      s.laws = options.injected[i - options.samples];
      if (s.laws.size() != graph.edge_count())
        throw Error(ErrorCode::SpecError, "injected ensemble must have one law per edge");
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < rep.samples; i = next++)
      evaluate_sample(graph, options.tolerances, rep.per_sample[i]);
  };
  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const auto& s : rep.per_sample) {
    rep.orbit_total += s.orbits;
    rep.degenerate += s.degenerate;
    rep.repaired += s.repaired;
    if (s.orbits > rep.orbit_bound) rep.bound_respected = false;
  }
  if (options.timing)
    rep.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<std::string> ScanReport::json_lines() const {
  std::vector<std::string> out;
  for (const auto& s : per_sample) {
    json laws = json::array();
    for (const auto& l : s.laws) laws.push_back(to_json(l));
    json j{{"kind", "sample"},
           {"index", s.index},
           {"seed", s.seed},
           {"injected", s.injected},
           {"laws", laws},
           {"orbits", s.orbits},
           {"degenerate", s.degenerate},
           {"repaired", s.repaired},
           {"max_repair_shift", s.max_repair_shift}};
    if (!s.errors.empty()) j["errors"] = s.errors;
    out.push_back(j.dump());
  }
  json summary{{"kind", "scan_summary"},
               {"samples", samples},
               {"seed", seed},
               {"orbit_bound", orbit_bound},
               {"orbit_total", orbit_total},
               {"degenerate", degenerate},
               {"repaired", repaired},
               {"bound_respected", bound_respected},
               {"tolerances",
                {{"collinear", tolerances.collinear},
                 {"zero_eig", tolerances.zero_eig},
                 {"residual", tolerances.residual}}},
               {"pass", passed()}};
  if (wall_time) summary["wall_time_s"] = *wall_time;
  out.push_back(summary.dump());
  return out;
}

std::string ScanReport::csv() const {
  std::ostringstream os;
  os << "index,seed,injected,orbits,degenerate,repaired\n";
  for (const auto& s : per_sample)
    os << s.index << ',' << s.seed << ',' << (s.injected ? 1 : 0) << ',' << s.orbits << ','
       << s.degenerate << ',' << s.repaired << '\n';
  return os.str();
}

// ---------------------------------------------------------------- Morse report

namespace {

double config_distance(const Configuration& a, const Configuration& b) {
  return (a.coordinates() - b.coordinates()).lpNorm<Eigen::Infinity>();
}

}  // namespace

MorseReport morse_report(const SystemSpec& spec) {
  const RMASystem system = spec.system();
  const TLGraph& g = system.graph();
  const Tolerances& tol = spec.tolerances;
  const EnumerationOptions eo = enumeration_options(tol);
  CheckOptions co;
  co.col_tol = tol.collinear;
  co.zero_tol = tol.zero_eig;
  co.residual_tol = tol.residual;

  MorseReport rep;
  std::set<std::vector<Edge>> part_sets;
  auto note_parts = [&](const CanonicalPartition& p) {
    for (const auto& part : p.parts) {
      auto s = part.edges;
      std::sort(s.begin(), s.end());
      part_sets.insert(std::move(s));
    }
  };

  const EnumerationResult lines = enumerate_line_equilibria(system, eo);
  for (std::size_t i = 0; i < lines.orbits.size(); ++i) {
    const auto& o = lines.orbits[i];
    json j = to_json(o);
    j["kind"] = "line_orbit";
    j["index"] = i;
    const IndexFormulaReport ix = check_index_formula(system, o.config, co);
    j["index_formula"] = to_json(ix);
    bool ok = ix.holds();
    if (!g.steps().empty()) {
      const InertiaFormulaReport jr = check_inertia_formula(system, o.config, co);
      j["inertia_formula"] = to_json(jr);
      ok = ok && jr.holds && jr.congruence_holds;
    }
    if (!ok) ++rep.violations;
    if (!o.nondegenerate) ++rep.degenerate;
    note_parts(o.partition);
    rep.records.push_back(std::move(j));
  }
  rep.line_orbits = lines.orbits.size();

  struct Found {
    Configuration config;
    std::size_t hits = 1;
    std::size_t first_run = 0;
  };
  std::vector<Found> found;
  const auto starts = spec.all_initial_configurations();
  for (std::size_t run = 0; run < starts.size(); ++run) {
    SettleResult sr;
    try {
      sr = settle_equilibrium(system, starts[run], std::max(tol.flow, 1e-8), tol.residual);
    } catch (const Error& e) {
      ++rep.flow_failures;
      rep.records.push_back({{"kind", "flow_failure"}, {"run", run}, {"reason", e.what()}});
      continue;
    }
    if (!sr.equilibrium) {
      ++rep.flow_failures;
      rep.records.push_back(
          {{"kind", "flow_failure"}, {"run", run}, {"reason", to_string(sr.flow.status)}});
      continue;
    }
    Configuration eq = *sr.equilibrium;
    eq = canonical_orbit_form(g, eq);
    auto it = std::find_if(found.begin(), found.end(), [&](const Found& f) {
      return config_distance(f.config, eq) <= kOrbitMatchTol;
    });
    if (it != found.end())
      ++it->hits;
    else
      found.push_back({eq, 1, run});
  }

  for (std::size_t i = 0; i < found.size(); ++i) {
    const Found& f = found[i];
    json j{{"kind", "equilibrium"},
           {"index", i},
           {"first_run", f.first_run},
           {"hits", f.hits},
           {"config", configuration_to_json(f.config)}};
    try {
      const IndexFormulaReport ix = check_index_formula(system, f.config, co);
      j["residual"] = residual(system, f.config);
      j["inertia"] = to_json(ix.full);
      j["nondegenerate"] = ix.full.n_zero == 3;
      j["partition"] = to_json(ix.partition);
      j["index_formula"] = to_json(ix);
      for (std::size_t k = 0; k < lines.orbits.size(); ++k)
        if (config_distance(lines.orbits[k].config, f.config) <= kOrbitMatchTol)
          j["line_orbit"] = k;
      if (!ix.holds()) ++rep.violations;
      if (ix.full.n_zero != 3) ++rep.degenerate;
      note_parts(ix.partition);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotEquilibrium) throw;
      j["error"] = e.what();
      ++rep.flow_failures;
    }
    rep.records.push_back(std::move(j));
  }
  rep.equilibria = found.size();

  for (const auto& edges : part_sets) {
    const Subsystem sub = make_subsystem(system, edges);
    const EnumerationResult res = enumerate_line_equilibria(sub.system, eo);
    std::size_t bad = 0;
    for (const auto& o : res.orbits)
      if (!o.nondegenerate) ++bad;
    rep.degenerate += bad;
    rep.records.push_back({{"kind", "subsystem"},
                           {"edges", edges_json(edges)},
                           {"vertices", vertices_json(sub.vertices)},
                           {"line_orbits", res.orbits.size()},
                           {"degenerate", bad}});
  }

  rep.records.push_back({{"kind", "verdict"},
                         {"pass", rep.passed()},
                         {"line_orbits", rep.line_orbits},
                         {"equilibria", rep.equilibria},
                         {"degenerate", rep.degenerate},
                         {"violations", rep.violations},
                         {"flow_failures", rep.flow_failures}});
  return rep;
}

std::vector<std::string> MorseReport::json_lines() const {
  std::vector<std::string> out;
  for (const auto& r : records) out.push_back(r.dump());
  return out;
}

std::string MorseReport::csv() const {
  std::ostringstream os;
  os << "kind,index,n_plus,n_zero,n_minus,nondegenerate,parts\n";
  for (const auto& r : records) {
    const std::string kind = r.at("kind").get<std::string>();
    if (kind != "line_orbit" && kind != "equilibrium") continue;
    if (!r.contains("inertia")) continue;
    const auto& in = r.at("inertia");
    os << kind << ',' << r.at("index").get<std::size_t>() << ',' << in.at("n_plus") << ','
       << in.at("n_zero") << ',' << in.at("n_minus") << ','
       << (r.at("nondegenerate").get<bool>() ? 1 : 0) << ',' << r.at("partition").size() << '\n';
  }
  return os.str();
}

}  // namespace trilaman
