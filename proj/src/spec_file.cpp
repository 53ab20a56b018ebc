#include "trilaman/spec_file.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>

#include "trilaman/error.hpp"

namespace trilaman {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::SpecError, what); }

double number(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    fail(std::string("missing field '") + key + "'");
  }
  if (!j.at(key).is_number()) fail(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

VertexId vertex(const json& j) {
  if (!j.is_number_integer()) fail("vertex ids must be integers");
  const long long v = j.get<long long>();
  if (v < 1) fail("vertex ids are 1-based");
  return static_cast<VertexId>(v - 1);
}

Edge edge(const json& j) {
  if (!j.is_array() || j.size() != 2) fail("edges are written as [u, v]");
  const VertexId a = vertex(j[0]), b = vertex(j[1]);
  if (a == b) fail("edge endpoints must differ");
  return Edge(a, b);
}

TLGraph parse_graph(const json& g) {
  try {
    if (g.contains("edges")) {
      std::vector<Edge> edges;
      for (const auto& e : g.at("edges")) edges.push_back(edge(e));
      return recognize_tlg(edges);
    }
    if (!g.contains("base_edge")) fail("graph needs 'base_edge' and 'steps', or 'edges'");
    const json& b = g.at("base_edge");
    if (!b.is_array() || b.size() != 2) fail("base_edge is written as [u, v]");
    std::vector<HennebergStep> steps;
    if (g.contains("steps")) {
      for (const auto& s : g.at("steps")) {
        const json& par = s.at("parents");
        if (!par.is_array() || par.size() != 2) fail("parents are written as [p, q]");
        steps.push_back({vertex(s.at("vertex")), {vertex(par[0]), vertex(par[1])}});
      }
    }
    return build_tlg(Edge(vertex(b[0]), vertex(b[1])), steps);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SpecError) throw;
    fail(std::string("invalid graph: ") + e.what());
  } catch (const json::exception& e) {
    fail(std::string("invalid graph: ") + e.what());
  }
}

Configuration parse_configuration(const json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail("initial configurations list one [x, y] point per vertex");
  Configuration c(n);
  for (int k = 0; k < n; ++k) {
    const json& p = j[k];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      fail("points are written as [x, y]");
    c.set_point(k, {p[0].get<double>(), p[1].get<double>()});
  }
  return c;
}

}  // namespace

Law LawSpec::build() const {
  Law base = Law::zero();
  if (family == "S")
    base = Law::stretch(k, c);
  else if (family == "power")
    base = Law::power(k, alpha, c);
  else
    fail("unknown law family '" + family + "'");
  for (const auto& b : bumps) base = sum_laws(base, b);
  return base;
}

LawSpec law_spec_from_json(const json& j) {
  if (!j.is_object()) fail("a law is an object");
  LawSpec l;
  l.family = j.value("family", std::string("S"));
  try {
    if (l.family == "S") {
      l.k = number(j, "k");
      l.c = number(j, "c");
    } else if (l.family == "power") {
      l.k = number(j, "k");
      l.alpha = number(j, "alpha");
      l.c = number(j, "c");
    } else {
      fail("unknown law family '" + l.family + "'");
    }
    if (!(l.k > 0.0) || !(l.c > 0.0) || !(l.alpha > 0.0))
      fail("law parameters k, c and alpha must be positive");
    if (j.contains("bumps")) {
      for (const auto& b : j.at("bumps"))
        l.bumps.push_back(make_bump(number(b, "center"), number(b, "value"),
                                    number(b, "slope", 0.0), number(b, "half_width")));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SpecError) throw;
    fail(std::string("invalid law: ") + e.what());
  }
  return l;
}

SystemSpec parse_spec(const json& doc) {
  if (!doc.is_object()) fail("spec must be a JSON object");
  if (doc.value("schema_version", -1) != kSpecSchemaVersion)
    fail("unsupported or missing schema_version (expected " +
         std::to_string(kSpecSchemaVersion) + ")");
  if (!doc.contains("graph")) fail("missing 'graph'");

  SystemSpec spec;
  spec.graph = parse_graph(doc.at("graph"));
  const int n = spec.graph.n();

  std::optional<LawSpec> fallback;
  if (doc.contains("default_law")) fallback = law_spec_from_json(doc.at("default_law"));
  std::map<Edge, LawSpec> by_edge;
  if (doc.contains("laws")) {
    for (const auto& entry : doc.at("laws")) {
      if (!entry.contains("edge")) fail("law entry without 'edge'");
      const Edge e = edge(entry.at("edge"));
      if (!spec.graph.has_edge(e.u, e.v))
        fail("law given for [" + std::to_string(e.u + 1) + ", " + std::to_string(e.v + 1) +
             "], which is not an edge");
      if (!by_edge.emplace(e, law_spec_from_json(entry)).second)
        fail("edge [" + std::to_string(e.u + 1) + ", " + std::to_string(e.v + 1) +
             "] has more than one law");
    }
  }
  for (const auto& e : spec.graph.edges()) {
    auto it = by_edge.find(e);
    if (it != by_edge.end())
      spec.law_specs.push_back(it->second);
    else if (fallback)
      spec.law_specs.push_back(*fallback);
    else
      fail("edge [" + std::to_string(e.u + 1) + ", " + std::to_string(e.v + 1) +
           "] has no law and there is no default_law");
  }
  for (const auto& l : spec.law_specs) {
    try {
      if (!l.build().class_f()) fail("a law is outside class F");
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SpecError) throw;
      fail(std::string("invalid law: ") + e.what());
    }
  }

  if (doc.contains("initial_configurations"))
    for (const auto& c : doc.at("initial_configurations"))
      spec.initial_configurations.push_back(parse_configuration(c, n));
  if (doc.contains("random_initial")) {
    const json& r = doc.at("random_initial");
    spec.random_initial.count = static_cast<int>(number(r, "count", 0.0));
    spec.random_initial.seed = static_cast<std::uint64_t>(number(r, "seed", 0.0));
    spec.random_initial.box = number(r, "box", 2.0);
    if (spec.random_initial.count < 0 || !(spec.random_initial.box > 0.0))
      fail("random_initial needs count >= 0 and box > 0");
  }
  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    spec.tolerances.collinear = number(t, "collinear", spec.tolerances.collinear);
    spec.tolerances.zero_eig = number(t, "zero_eig", spec.tolerances.zero_eig);
    spec.tolerances.residual = number(t, "residual", spec.tolerances.residual);
    spec.tolerances.flow = number(t, "flow", spec.tolerances.flow);
  }
  return spec;
}

SystemSpec parse_spec_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  try {
    return parse_spec(doc);
  } catch (const json::exception& e) {
    fail(std::string("malformed spec: ") + e.what());
  }
}

SystemSpec load_spec(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path);
    if (!in) fail("cannot open spec file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_spec_text(text);
}

RMASystem SystemSpec::system() const {
  std::vector<Law> laws;
  for (const auto& l : law_specs) laws.push_back(l.build());
  return RMASystem(graph, std::move(laws));
}

std::vector<Configuration> SystemSpec::all_initial_configurations() const {
  std::vector<Configuration> out = initial_configurations;
  std::mt19937_64 rng(random_initial.seed);
  std::uniform_real_distribution<double> coord(-random_initial.box, random_initial.box);
  for (int k = 0; k < random_initial.count; ++k) {
    Configuration c(graph.n());
    for (int v = 0; v < graph.n(); ++v) {
      const double x = coord(rng);
      const double y = coord(rng);
      c.set_point(v, {x, y});
    }
    out.push_back(c);
  }
  return out;
}

json edge_to_json(Edge e) { return json::array({e.u + 1, e.v + 1}); }

json configuration_to_json(const Configuration& c) {
  json out = json::array();
  for (int k = 0; k < c.size(); ++k) out.push_back(json::array({c.a(k), c.b(k)}));
  return out;
}

json to_json(const LawSpec& l) {
  json j{{"family", l.family}, {"k", l.k}, {"c", l.c}};
  if (l.family == "power") j["alpha"] = l.alpha;
  if (!l.bumps.empty()) {
    j["bumps"] = json::array();
    for (const auto& b : l.bumps)
      j["bumps"].push_back({{"center", b.center},
                            {"value", b.value},
                            {"slope", b.slope},
                            {"half_width", b.half_width}});
  }
  return j;
}

json to_json(const SystemSpec& spec) {
  json steps = json::array();
  for (const auto& s : spec.graph.steps())
    steps.push_back({{"vertex", s.vertex + 1},
                     {"parents", json::array({s.parents.first + 1, s.parents.second + 1})}});
  json laws = json::array();
  for (std::size_t k = 0; k < spec.law_specs.size(); ++k) {
    json l = to_json(spec.law_specs[k]);
    l["edge"] = edge_to_json(spec.graph.edges()[k]);
    laws.push_back(l);
  }
  json doc{{"schema_version", kSpecSchemaVersion},
           {"graph", {{"base_edge", edge_to_json(spec.graph.base_edge())}, {"steps", steps}}},
           {"laws", laws},
           {"tolerances",
            {{"collinear", spec.tolerances.collinear},
             {"zero_eig", spec.tolerances.zero_eig},
             {"residual", spec.tolerances.residual},
             {"flow", spec.tolerances.flow}}}};
  if (!spec.initial_configurations.empty()) {
    doc["initial_configurations"] = json::array();
    for (const auto& c : spec.initial_configurations)
      doc["initial_configurations"].push_back(configuration_to_json(c));
  }
  if (spec.random_initial.count > 0)
    doc["random_initial"] = {{"count", spec.random_initial.count},
                             {"seed", spec.random_initial.seed},
                             {"box", spec.random_initial.box}};
  return doc;
}

}  // namespace trilaman
