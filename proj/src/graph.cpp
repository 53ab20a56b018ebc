#include "trilaman/graph.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "trilaman/error.hpp"

namespace trilaman {

bool TLGraph::has_edge(VertexId a, VertexId b) const {
  return edge_index(Edge(a, b)).has_value();
}

std::optional<std::size_t> TLGraph::edge_index(Edge e) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || *it != e) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

std::vector<VertexId> TLGraph::construction_order() const {
  std::vector<VertexId> order{base_.u, base_.v};
  for (const auto& s : steps_) order.push_back(s.vertex);
  return order;
}

TLGraph build_tlg(Edge base, const std::vector<HennebergStep>& steps) {
  const int n = static_cast<int>(steps.size()) + 2;
  auto in_range = [n](VertexId x) { return x >= 0 && x < n; };

  if (!in_range(base.u) || !in_range(base.v))
    throw Error(ErrorCode::DanglingReference, "base edge vertex out of range");
  if (base.u == base.v) throw Error(ErrorCode::DuplicateVertex, "base edge is a self-loop");

  std::vector<bool> present(n, false);
  present[base.u] = present[base.v] = true;
  std::set<Edge> edges{base};

  for (const auto& step : steps) {
    const auto [p, q] = step.parents;
    if (!in_range(step.vertex))
      throw Error(ErrorCode::DanglingReference,
                  "step vertex " + std::to_string(step.vertex) + " out of range");
    if (present[step.vertex])
      throw Error(ErrorCode::DuplicateVertex,
                  "vertex " + std::to_string(step.vertex) + " added twice");
    if (!in_range(p) || !in_range(q) || !present[p] || !present[q])
      throw Error(ErrorCode::DanglingReference,
                  "step for vertex " + std::to_string(step.vertex) +
                      " references a vertex that does not exist yet");
    if (p == q || !edges.contains(Edge(p, q)))
      throw Error(ErrorCode::NonAdjacentParents,
                  "parents of vertex " + std::to_string(step.vertex) + " are not adjacent");
    present[step.vertex] = true;
    edges.insert(Edge(step.vertex, p));
    edges.insert(Edge(step.vertex, q));
  }

  TLGraph g;
  g.n_ = n;
  g.base_ = base;
  g.steps_ = steps;
  g.edges_.assign(edges.begin(), edges.end());
  g.adjacency_.assign(n, {});
  for (const auto& e : g.edges_) {
    g.adjacency_[e.u].push_back(e.v);
    g.adjacency_[e.v].push_back(e.u);
  }
  for (auto& nb : g.adjacency_) std::sort(nb.begin(), nb.end());
  return g;
}

namespace {

struct WorkGraph {
  std::vector<std::set<VertexId>> nbrs;
  std::set<VertexId> alive;

  bool deletable(VertexId v) const {
    if (nbrs[v].size() != 2) return false;
    const VertexId a = *nbrs[v].begin();
    const VertexId b = *std::next(nbrs[v].begin());
    return nbrs[a].contains(b);
  }

  HennebergStep remove(VertexId v) {
    const VertexId a = *nbrs[v].begin();
    const VertexId b = *std::next(nbrs[v].begin());
    nbrs[a].erase(v);
    nbrs[b].erase(v);
    nbrs[v].clear();
    alive.erase(v);
    return {v, {a, b}};
  }
};

// Validates size/density and fills a WorkGraph; returns nullopt on failure.
std::optional<WorkGraph> make_work_graph(const std::vector<Edge>& edges) {
  if (edges.empty()) return std::nullopt;
  int n = 0;
  for (const auto& e : edges) {
    if (e.u < 0 || e.u == e.v) return std::nullopt;
    n = std::max({n, e.u + 1, e.v + 1});
  }
  std::set<Edge> unique(edges.begin(), edges.end());
  if (unique.size() != edges.size()) return std::nullopt;
  if (static_cast<int>(edges.size()) != 2 * n - 3) return std::nullopt;

  WorkGraph w;
  w.nbrs.assign(n, {});
  for (const auto& e : edges) {
    w.nbrs[e.u].insert(e.v);
    w.nbrs[e.v].insert(e.u);
  }
  for (VertexId v = 0; v < n; ++v) {
    if (w.nbrs[v].empty()) return std::nullopt;
    w.alive.insert(v);
  }
  return w;
}

TLGraph from_deletions(const WorkGraph& final_pair, std::vector<HennebergStep> deletions) {
  const VertexId a = *final_pair.alive.begin();
  const VertexId b = *std::next(final_pair.alive.begin());
  std::reverse(deletions.begin(), deletions.end());
  return build_tlg(Edge(a, b), deletions);
}

void enumerate_orders(WorkGraph& w, std::vector<HennebergStep>& deletions,
                      std::size_t limit, std::vector<TLGraph>& out) {
  if (out.size() >= limit) return;
  if (w.alive.size() == 2) {
    out.push_back(from_deletions(w, deletions));
    return;
  }
  const std::vector<VertexId> candidates(w.alive.begin(), w.alive.end());
  for (VertexId v : candidates) {
    if (out.size() >= limit) return;
    if (!w.deletable(v)) continue;
    const auto saved_nbrs = w.nbrs;
    deletions.push_back(w.remove(v));
    enumerate_orders(w, deletions, limit, out);
    deletions.pop_back();
    w.nbrs = saved_nbrs;
    w.alive.insert(v);
  }
}

}  // namespace

std::optional<TLGraph> try_recognize_tlg(const std::vector<Edge>& edges) {
  auto work = make_work_graph(edges);
  if (!work) return std::nullopt;
  WorkGraph& w = *work;

  std::vector<HennebergStep> deletions;
  while (w.alive.size() > 2) {
    auto it = std::find_if(w.alive.begin(), w.alive.end(),
                           [&](VertexId v) { return w.deletable(v); });
    if (it == w.alive.end()) return std::nullopt;
    deletions.push_back(w.remove(*it));
  }
  const VertexId a = *w.alive.begin();
  const VertexId b = *std::next(w.alive.begin());
  if (!w.nbrs[a].contains(b)) return std::nullopt;
  return from_deletions(w, std::move(deletions));
}

TLGraph recognize_tlg(const std::vector<Edge>& edges) {
  auto g = try_recognize_tlg(edges);
  if (!g) throw Error(ErrorCode::NotTLG, "edge set admits no Henneberg construction");
  return *std::move(g);
}

std::vector<TLGraph> alternative_henneberg_orders(const TLGraph& graph, std::size_t limit) {
  std::vector<TLGraph> out;
  if (limit == 0) return out;
  auto work = make_work_graph(graph.edges());
  if (!work) return {graph};
  std::vector<HennebergStep> deletions;
  enumerate_orders(*work, deletions, limit, out);
  return out;
}

std::optional<VertexId> InducedSubgraph::local_id(VertexId parent) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), parent);
  if (it == vertices.end() || *it != parent) return std::nullopt;
  return static_cast<VertexId>(it - vertices.begin());
}

InducedSubgraph induced_subsystem(const TLGraph& graph, const std::vector<Edge>& edge_subset) {
  std::set<VertexId> verts;
  for (const auto& e : edge_subset) {
    if (!graph.has_edge(e.u, e.v))
      throw Error(ErrorCode::DanglingReference, "edge is not part of the graph");
    verts.insert(e.u);
    verts.insert(e.v);
  }
  InducedSubgraph sub;
  sub.vertices.assign(verts.begin(), verts.end());
  std::vector<Edge> local;
  local.reserve(edge_subset.size());
  for (const auto& e : edge_subset) local.emplace_back(*sub.local_id(e.u), *sub.local_id(e.v));
  auto g = try_recognize_tlg(local);
  if (!g) throw Error(ErrorCode::NotTLG, "edge subset is not a triangulated Laman subgraph");
  sub.graph = *std::move(g);
  return sub;
}

InducedSubgraph remove_last_vertex(const TLGraph& graph) {
  if (graph.steps().empty())
    throw Error(ErrorCode::NotTLG, "cannot remove a vertex from a single edge");
  const VertexId removed = graph.steps().back().vertex;
  InducedSubgraph sub;
  for (VertexId v = 0; v < graph.n(); ++v)
    if (v != removed) sub.vertices.push_back(v);
  auto id = [&](VertexId v) { return *sub.local_id(v); };
  std::vector<HennebergStep> steps;
  for (std::size_t k = 0; k + 1 < graph.steps().size(); ++k) {
    const auto& s = graph.steps()[k];
    steps.push_back({id(s.vertex), {id(s.parents.first), id(s.parents.second)}});
  }
  sub.graph = build_tlg(Edge(id(graph.base_edge().u), id(graph.base_edge().v)), steps);
  return sub;
}

std::vector<std::vector<Edge>> tlg_subgraphs(const TLGraph& graph) {
  std::set<std::vector<Edge>> seen;
  std::vector<std::vector<Edge>> frontier;
  for (const auto& e : graph.edges()) {
    frontier.push_back({e});
    seen.insert({e});
  }
  const auto& adj = graph.adjacency();
  while (!frontier.empty()) {
    std::vector<std::vector<Edge>> next;
    for (const auto& sub : frontier) {
      std::set<VertexId> verts;
      for (const auto& e : sub) {
        verts.insert(e.u);
        verts.insert(e.v);
      }
      for (const auto& e : sub) {
        for (VertexId w : adj[e.u]) {
          if (verts.contains(w) || !graph.has_edge(w, e.v)) continue;
          auto grown = sub;
          grown.emplace_back(w, e.u);
          grown.emplace_back(w, e.v);
          std::sort(grown.begin(), grown.end());
          if (seen.insert(grown).second) next.push_back(std::move(grown));
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::vector<Edge>> out(seen.begin(), seen.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return out;
}

}  // namespace trilaman
