#include <doctest.h>

#include "trilaman/error.hpp"
#include "trilaman/report.hpp"

using namespace trilaman;
using nlohmann::json;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::SpecError;
}

const char* kTriangle = R"({
  "schema_version": 1,
  "graph": {"base_edge": [1, 2], "steps": [{"vertex": 3, "parents": [1, 2]}]},
  "default_law": {"family": "S", "k": 1.0, "c": 1.0},
  "random_initial": {"count": 10, "seed": 7, "box": 2.0}
})";

const char* kDegenerate = R"({
  "schema_version": 1,
  "graph": {"base_edge": [2, 3], "steps": [{"vertex": 1, "parents": [2, 3]}]},
  "laws": [
    {"edge": [1, 2], "family": "S", "k": 1.0, "c": 1.0},
    {"edge": [1, 3], "family": "S", "k": 1.0, "c": 1.0},
    {"edge": [2, 3], "family": "S", "k": 1.0, "c": 4.0}
  ]
})";

}  // namespace

TEST_CASE("spec parsing: construction, edge list, laws, initials") {
  const SystemSpec s = parse_spec_text(kTriangle);
  CHECK(s.graph.n() == 3);
  CHECK(s.law_specs.size() == 3);
  CHECK(s.all_initial_configurations().size() == 10);
  CHECK(parse_spec_text(kTriangle).all_initial_configurations()[4].coordinates() ==
        s.all_initial_configurations()[4].coordinates());

  const SystemSpec e = parse_spec_text(R"({
    "schema_version": 1,
    "graph": {"edges": [[1,2],[1,3],[2,3],[2,4],[3,4]]},
    "default_law": {"family": "power", "k": 2.0, "alpha": 1.5, "c": 0.5},
    "initial_configurations": [[[0,0],[1,0],[0,1],[1,1]]],
    "tolerances": {"collinear": 1e-8}
  })");
  CHECK(e.graph.n() == 4);
  CHECK(e.initial_configurations.size() == 1);
  CHECK(e.tolerances.collinear == 1e-8);
  CHECK(e.system().admissible());

  const SystemSpec d = parse_spec_text(kDegenerate);
  CHECK(rest_length(d.system().law(Edge(1, 2))) == doctest::Approx(2.0));

  // Round trip through the serializer.
  const SystemSpec back = parse_spec(to_json(d));
  CHECK(back.graph.edges() == d.graph.edges());
  CHECK(rest_length(back.system().law(Edge(1, 2))) == doctest::Approx(2.0));
}

TEST_CASE("spec errors are SpecError") {
  auto parse = [](const char* text) { return [text] { parse_spec_text(text); }; };
  CHECK(code_of(parse("not json")) == ErrorCode::SpecError);
  CHECK(code_of(parse(R"({"schema_version": 1,"graph": {"edges": [[1,2],[2,3],[3,4],[4,1]]},
                          "default_law": {"family": "S"}})")) == ErrorCode::SpecError);
  CHECK(code_of(parse(R"({"schema_version": 1,"graph": {"base_edge": [1,2], "steps": [{"vertex": 3, "parents": [1,4]}]},
                          "default_law": {"family": "S"}})")) == ErrorCode::SpecError);
  CHECK(code_of(parse(R"({"schema_version": 1,"graph": {"base_edge": [1,2], "steps": []}})")) == ErrorCode::SpecError);
  CHECK(code_of(parse(R"({"schema_version": 1,"graph": {"base_edge": [1,2], "steps": []},
                          "laws": [{"edge": [1,2], "family": "S", "k": -1, "c": 1}]})")) ==
        ErrorCode::SpecError);
  CHECK(code_of(parse(R"({"schema_version": 1,"graph": {"base_edge": [1,2], "steps": []},
                          "laws": [{"edge": [1,3], "family": "S"}]})")) == ErrorCode::SpecError);
  CHECK(code_of(parse(R"({"schema_version": 1,"graph": {"base_edge": [1,2], "steps": []},
                          "laws": [{"edge": [1,2], "family": "S"}, {"edge": [2,1], "family": "S"}]})")) ==
        ErrorCode::SpecError);
  CHECK(code_of(parse(R"({"schema_version": 99, "graph": {"base_edge": [1,2], "steps": []},
                          "default_law": {"family": "S"}})")) == ErrorCode::SpecError);
  CHECK(code_of([] { load_spec("/nonexistent/spec.json"); }) == ErrorCode::SpecError);
}

TEST_CASE("genericity scan on the triangle") {
  const TLGraph t = build_tlg(Edge(0, 1), {{2, {0, 1}}});
  ScanOptions opts;
  opts.samples = 40;
  opts.seed = 5;
  opts.timing = false;
  const ScanReport r = run_genericity_scan(t, SamplerSpec{}, opts);
  CHECK(r.orbit_bound == 3);
  CHECK(r.degenerate == 0);
  CHECK(r.passed());
  for (const auto& s : r.per_sample) CHECK(s.orbits == 3);
  CHECK(r.orbit_total == 120);

  SUBCASE("byte-identical reruns and worker independence") {
    const auto again = run_genericity_scan(t, SamplerSpec{}, opts);
    CHECK(again.json_lines() == r.json_lines());
    CHECK(again.csv() == r.csv());
    ScanOptions par = opts;
    par.workers = 4;
    CHECK(run_genericity_scan(t, SamplerSpec{}, par).json_lines() == r.json_lines());
  }

  SUBCASE("injected degenerate ensemble") {
    const SystemSpec d = parse_spec_text(kDegenerate);
    // Re-express the degenerate laws on the scan's graph labels: vertex 0 is
    // the one reduced there, so the heavy law sits on the base edge.
    const TLGraph g = d.graph;
    ScanOptions inj = opts;
    inj.samples = 5;
    inj.injected.push_back(d.law_specs);
    const ScanReport ri = run_genericity_scan(g, SamplerSpec{}, inj);
    CHECK(ri.degenerate == 1);
    CHECK(ri.repaired == 1);
    CHECK_FALSE(ri.passed());
    CHECK(ri.per_sample.back().injected);
    CHECK(ri.per_sample.back().max_repair_shift <= kRepairShiftTol);
  }

  SUBCASE("report shapes") {
    const auto lines = r.json_lines();
    REQUIRE(lines.size() == 41);
    CHECK(json::parse(lines.front()).at("kind") == "sample");
    const json summary = json::parse(lines.back());
    CHECK(summary.at("kind") == "scan_summary");
    CHECK_FALSE(summary.contains("wall_time_s"));
    ScanOptions timed = opts;
    timed.timing = true;
    timed.samples = 2;
    CHECK(json::parse(run_genericity_scan(t, SamplerSpec{}, timed).json_lines().back())
              .contains("wall_time_s"));
  }
}

TEST_CASE("power-law scan on a 4-vertex TLG") {
  const TLGraph g = build_tlg(Edge(0, 1), {{2, {0, 1}}, {3, {1, 2}}});
  SamplerSpec sampler;
  sampler.family = "power";
  ScanOptions opts;
  opts.samples = 20;
  opts.seed = 3;
  opts.timing = false;
  const ScanReport r = run_genericity_scan(g, sampler, opts);
  CHECK(r.orbit_bound == 9);
  CHECK(r.bound_respected);
  CHECK(r.degenerate == 0);
}

TEST_CASE("morse report: pair, triangle, degenerate") {
  const SystemSpec pair = parse_spec_text(R"({
    "schema_version": 1,
    "graph": {"base_edge": [1, 2], "steps": []},
    "default_law": {"family": "S", "k": 1, "c": 1},
    "random_initial": {"count": 3, "seed": 1}
  })");
  const MorseReport rp = morse_report(pair);
  CHECK(rp.line_orbits == 1);
  CHECK(rp.equilibria == 1);
  CHECK(rp.passed());

  const MorseReport rt = morse_report(parse_spec_text(kTriangle));
  CHECK(rt.line_orbits == 3);
  CHECK(rt.equilibria >= 1);
  CHECK(rt.violations == 0);
  CHECK(rt.passed());
  const json verdict = rt.records.back();
  CHECK(verdict.at("kind") == "verdict");
  CHECK(verdict.at("pass") == true);
  for (const auto& rec : rt.records) {
    if (rec.at("kind") != "equilibrium") continue;
    CHECK(rec.at("index_formula").at("holds") == true);
  }
  CHECK(rt.json_lines().size() == rt.records.size());
  CHECK_FALSE(rt.csv().empty());

  const MorseReport rd = morse_report(parse_spec_text(kDegenerate));
  CHECK(rd.degenerate >= 1);
  CHECK_FALSE(rd.passed());
}
