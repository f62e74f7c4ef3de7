#pragma once

// k arc-disjoint shortest (s,t)-paths as a unit-capacity min-cost flow, path
// extraction from the flow support, and the vertex-split reduction for
// vertex-disjoint paths.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orientflow/demand.hpp"
#include "orientflow/errors.hpp"
#include "orientflow/flow.hpp"
#include "orientflow/graph.hpp"

namespace orientflow {

/// d(s) = +k, d(t) = -k, zero elsewhere.
inline Demand st_demand(int vertex_count, Vertex s, Vertex t, std::int64_t k) {
  if (s < 1 || s > vertex_count || t < 1 || t > vertex_count) {
    throw DemandError("terminal out of range");
  }
  if (s == t) throw DemandError("source and sink must differ");
  if (k < 1) throw DemandError("k must be positive");
  std::vector<std::int64_t> values(static_cast<std::size_t>(vertex_count), 0);
  values[static_cast<std::size_t>(s - 1)] = k;
  values[static_cast<std::size_t>(t - 1)] = -k;
  return Demand(std::move(values));
}

struct PathSet {
  std::vector<std::vector<Vertex>> paths;
  std::int64_t total_weight = 0;

  friend bool operator==(const PathSet&, const PathSet&) = default;
};

inline std::string format_path(const std::vector<Vertex>& path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += '>';
    s += std::to_string(path[i]);
  }
  return s;
}

/// Splits an acyclic (s,t)-flow of value k into k paths. Each walk starts at
/// s and always leaves through the unused arc with the lowest id.
inline PathSet decompose_flow(const WeightedGraph& g, const DirectedSubgraph& support, Vertex s,
                              Vertex t, std::int64_t k) {
  std::vector<std::vector<ArcId>> out(static_cast<std::size_t>(g.vertex_count()) + 1);
  PathSet result;
  for (ArcId a : support.arcs()) {
    out[static_cast<std::size_t>(g.arc(a).tail)].push_back(a);  // ascending id order
    result.total_weight += g.weight(a);
  }
  std::vector<std::size_t> next(out.size(), 0);

  for (std::int64_t walk = 0; walk < k; ++walk) {
    std::vector<Vertex> path{s};
    std::set<Vertex> visited{s};
    for (Vertex v = s; v != t;) {
      auto& cursor = next[static_cast<std::size_t>(v)];
      const auto& arcs = out[static_cast<std::size_t>(v)];
      if (cursor == arcs.size()) {
        throw Error("support is not an (s,t)-flow of value " + std::to_string(k));
      }
      v = g.arc(arcs[cursor++]).head;
      if (!visited.insert(v).second) throw CyclicSupport("flow support contains a cycle");
      path.push_back(v);
    }
    result.paths.push_back(std::move(path));
  }
  for (std::size_t v = 0; v < out.size(); ++v) {
    if (next[v] != out[v].size()) {
      throw CyclicSupport("flow support has arcs outside the k paths");
    }
  }
  return result;
}

/// Minimal-weight collection of k arc-disjoint directed (s,t)-paths inside D,
/// or nullopt when D does not k-connect s to t.
inline std::optional<PathSet> k_disjoint_paths(const WeightedGraph& g, const DirectedSubgraph& d,
                                               Vertex s, Vertex t, std::int64_t k) {
  auto flow = min_cost_flow(g, d, st_demand(g.vertex_count(), s, t, k));
  if (!flow) return std::nullopt;
  return decompose_flow(g, flow->support, s, t, k);
}

/// Graph with selected vertices split into an in-copy and an out-copy joined
/// by a unit-capacity internal edge.
///
/// Each original vertex keeps its id as the in-copy; out-copies are appended.
/// An edge {u,v} touching a split vertex becomes two edges {u_out, v_in} and
/// {v_out, u_in} whose reference arcs carry u->v and v->u respectively. Only
/// those reference arcs (and the in->out internal arcs) are admitted by
/// lift(), so flows never run backwards through a split vertex.
///
/// Original weights are multiplied by weight_scale (> number of split
/// vertices) and internal edges weigh 1, so the internal edges never change
/// which collection is cheapest.
struct SplitGraph {
  WeightedGraph graph;
  std::vector<Vertex> in_vertex;   // by original vertex, index 0 unused
  std::vector<Vertex> out_vertex;  // by original vertex, index 0 unused
  std::vector<Vertex> original;    // by split-graph vertex, index 0 unused
  std::vector<ArcId> forward_image;   // by original edge: image of u->v
  std::vector<ArcId> backward_image;  // by original edge: image of v->u
  std::vector<ArcId> internal_arcs;
  std::int64_t weight_scale = 1;

  DirectedSubgraph lift(const DirectedSubgraph& d) const {
    DirectedSubgraph out(graph.edge_count());
    for (ArcId a : d.arcs()) {
      out.insert(a.is_reference() ? forward_image.at(a.edge()) : backward_image.at(a.edge()));
    }
    for (ArcId a : internal_arcs) out.insert(a);
    return out;
  }

  std::vector<Vertex> project(const std::vector<Vertex>& path) const {
    std::vector<Vertex> out;
    for (Vertex v : path) {
      const Vertex o = original.at(static_cast<std::size_t>(v));
      if (out.empty() || out.back() != o) out.push_back(o);
    }
    return out;
  }

  /// Original-graph weight of a flow support in the split graph.
  std::int64_t original_weight(const DirectedSubgraph& support) const {
    std::int64_t w = 0;
    for (ArcId a : support.arcs()) {
      if (std::find(internal_arcs.begin(), internal_arcs.end(), a) == internal_arcs.end()) {
        w += graph.weight(a);
      }
    }
    return w / weight_scale;
  }
};

inline SplitGraph vertex_split(const WeightedGraph& g, const std::vector<Vertex>& split_vertices) {
  const int n = g.vertex_count();
  std::vector<bool> is_split(static_cast<std::size_t>(n) + 1, false);
  for (Vertex v : split_vertices) {
    if (v < 1 || v > n) throw DemandError("split vertex out of range");
    is_split[static_cast<std::size_t>(v)] = true;
  }

  SplitGraph sg;
  sg.in_vertex.assign(static_cast<std::size_t>(n) + 1, 0);
  sg.out_vertex.assign(static_cast<std::size_t>(n) + 1, 0);
  sg.original.assign(static_cast<std::size_t>(n) + 1, 0);
  std::int64_t split_count = 0;
  Vertex next_id = n;
  for (Vertex v = 1; v <= n; ++v) {
    sg.in_vertex[static_cast<std::size_t>(v)] = v;
    sg.original[static_cast<std::size_t>(v)] = v;
    if (is_split[static_cast<std::size_t>(v)]) {
      sg.out_vertex[static_cast<std::size_t>(v)] = ++next_id;
      sg.original.push_back(v);
      ++split_count;
    } else {
      sg.out_vertex[static_cast<std::size_t>(v)] = v;
    }
  }
  sg.weight_scale = split_count + 1;

  std::vector<Edge> edges;
  auto in_of = [&](Vertex v) { return sg.in_vertex[static_cast<std::size_t>(v)]; };
  auto out_of = [&](Vertex v) { return sg.out_vertex[static_cast<std::size_t>(v)]; };
  for (const Edge& e : g.edges()) {
    const std::int64_t w = e.weight * sg.weight_scale;
    if (!is_split[static_cast<std::size_t>(e.u)] && !is_split[static_cast<std::size_t>(e.v)]) {
      sg.forward_image.push_back(reference_arc(edges.size()));
      sg.backward_image.push_back(reverse_arc(edges.size()));
      edges.push_back(Edge{e.u, e.v, w});
      continue;
    }
    sg.forward_image.push_back(reference_arc(edges.size()));
    edges.push_back(Edge{out_of(e.u), in_of(e.v), w});
    sg.backward_image.push_back(reference_arc(edges.size()));
    edges.push_back(Edge{out_of(e.v), in_of(e.u), w});
  }
  for (Vertex v = 1; v <= n; ++v) {
    if (!is_split[static_cast<std::size_t>(v)]) continue;
    sg.internal_arcs.push_back(reference_arc(edges.size()));
    edges.push_back(Edge{in_of(v), out_of(v), 1});
  }
  sg.graph = WeightedGraph(next_id, std::move(edges));
  return sg;
}

/// Minimal collection of k internally vertex-disjoint (s,t)-paths inside D.
/// Every vertex other than s and t is split; weights are reported in the
/// original graph's units.
inline std::optional<PathSet> vertex_disjoint_paths(const WeightedGraph& g,
                                                    const DirectedSubgraph& d, Vertex s, Vertex t,
                                                    std::int64_t k) {
  st_demand(g.vertex_count(), s, t, k);  // validates terminals
  std::vector<Vertex> interior;
  for (Vertex v = 1; v <= g.vertex_count(); ++v) {
    if (v != s && v != t) interior.push_back(v);
  }
  const SplitGraph sg = vertex_split(g, interior);
  const DirectedSubgraph lifted = sg.lift(d);
  auto flow = min_cost_flow(sg.graph, lifted, st_demand(sg.graph.vertex_count(), s, t, k));
  if (!flow) return std::nullopt;
  PathSet split_paths = decompose_flow(sg.graph, flow->support, s, t, k);
  PathSet result;
  for (const auto& p : split_paths.paths) result.paths.push_back(sg.project(p));
  result.total_weight = sg.original_weight(flow->support);
  return result;
}

}  // namespace orientflow
