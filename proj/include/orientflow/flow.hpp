#pragma once

// Unit-capacity min-cost d-flow with a unique optimum.
//
// Ties are broken lexicographically: a flow's cost is the pair
// (sum of edge weights, sum of 2^arc_id over its support). Distinct 0/1 flows
// have distinct supports and therefore distinct tiebreaks, so the optimum is
// unique and A(D) is a function of D. The solver works with the equivalent
// scalar cost w(a) * 2^(2m) + 2^arc_id.

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "orientflow/demand.hpp"
#include "orientflow/errors.hpp"
#include "orientflow/graph.hpp"

namespace orientflow {

using BigInt = boost::multiprecision::cpp_int;

struct LexCost {
  std::int64_t base = 0;
  BigInt tiebreak = 0;

  friend bool operator==(const LexCost& a, const LexCost& b) {
    return a.base == b.base && a.tiebreak == b.tiebreak;
  }
  friend std::strong_ordering operator<=>(const LexCost& a, const LexCost& b) {
    if (a.base != b.base) return a.base <=> b.base;
    if (a.tiebreak < b.tiebreak) return std::strong_ordering::less;
    if (b.tiebreak < a.tiebreak) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

inline LexCost lex_cost(const WeightedGraph& g, const DirectedSubgraph& support) {
  LexCost c;
  for (ArcId a : support.arcs()) {
    c.base += g.weight(a);
    boost::multiprecision::bit_set(c.tiebreak, static_cast<unsigned>(a.value));
  }
  return c;
}

/// 0/1 flow identified with its support.
struct IntegralFlow {
  DirectedSubgraph support;
  LexCost cost;

  friend bool operator==(const IntegralFlow& a, const IntegralFlow& b) {
    return a.support == b.support && a.cost == b.cost;
  }
};

/// Net out-flow of `support` equals d(u) at every vertex.
inline bool conserves(const WeightedGraph& g, const DirectedSubgraph& support, const Demand& d) {
  std::vector<std::int64_t> net(static_cast<std::size_t>(g.vertex_count()) + 1, 0);
  for (ArcId a : support.arcs()) {
    const Arc arc = g.arc(a);
    ++net[static_cast<std::size_t>(arc.tail)];
    --net[static_cast<std::size_t>(arc.head)];
  }
  for (Vertex v = 1; v <= g.vertex_count(); ++v) {
    if (net[static_cast<std::size_t>(v)] != d[v]) return false;
  }
  return true;
}

namespace detail {

inline void check_inputs(const WeightedGraph& g, const DirectedSubgraph& d, const Demand& dem) {
  if (d.edge_count() != g.edge_count()) {
    throw ArcError("arc set has " + std::to_string(d.edge_count()) + " slots, graph has " +
                   std::to_string(g.edge_count()));
  }
  if (dem.vertex_count() != g.vertex_count()) {
    throw DemandError("demand has " + std::to_string(dem.vertex_count()) +
                      " vertices, graph has " + std::to_string(g.vertex_count()));
  }
}

/// Perturbed scalar arc cost w * 2^(2m) + 2^id.
inline BigInt perturbed_cost(const WeightedGraph& g, ArcId a) {
  BigInt c = g.weight(a);
  c <<= static_cast<unsigned>(g.arc_count());
  boost::multiprecision::bit_set(c, static_cast<unsigned>(a.value));
  return c;
}

/// Whether every path length and potential of the residual network fits in
/// a signed 64-bit integer.
inline bool fits_int64(const WeightedGraph& g, const DirectedSubgraph& d) {
  if (g.arc_count() >= 62) return false;
  BigInt total = 0;
  for (ArcId a : d.arcs()) total += perturbed_cost(g, a);
  return total < (BigInt(1) << 61);
}

template <typename Cost>
Cost to_cost(const BigInt& c) {
  if constexpr (std::is_same_v<Cost, BigInt>) {
    return c;
  } else {
    return static_cast<Cost>(c);
  }
}

// Successive shortest paths with Johnson potentials. Super source S feeds
// every positive-demand vertex, every negative-demand vertex drains into
// super sink T. Each augmentation moves one unit: every S-T path crosses at
// least one unit-capacity arc of D.
template <typename Cost>
class SuccessiveShortestPaths {
 public:
  SuccessiveShortestPaths(const WeightedGraph& g, const DirectedSubgraph& d, const Demand& dem)
      : g_(g), dem_(dem), n_(g.vertex_count() + 2), source_(n_ - 2), sink_(n_ - 1), adj_(n_) {
    for (ArcId a : d.arcs()) {
      const Arc arc = g.arc(a);
      arc_slot_.emplace_back(a, add_arc(arc.tail - 1, arc.head - 1, 1,
                                        to_cost<Cost>(perturbed_cost(g, a))));
    }
    for (Vertex v = 1; v <= g.vertex_count(); ++v) {
      if (dem[v] > 0) add_arc(source_, v - 1, dem[v], Cost{0});
      if (dem[v] < 0) add_arc(v - 1, sink_, -dem[v], Cost{0});
    }
  }

  std::optional<DirectedSubgraph> solve() {
    std::vector<Cost> potential(static_cast<std::size_t>(n_), Cost{0});
    std::vector<Cost> dist(static_cast<std::size_t>(n_));
    std::vector<int> parent_arc(static_cast<std::size_t>(n_));
    std::vector<bool> reached(static_cast<std::size_t>(n_));

    for (std::int64_t routed = 0, need = dem_.total_supply(); routed < need; ++routed) {
      std::fill(reached.begin(), reached.end(), false);
      std::fill(parent_arc.begin(), parent_arc.end(), -1);
      std::vector<bool> done(static_cast<std::size_t>(n_), false);

      using Entry = std::pair<Cost, int>;
      std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
      dist[idx(source_)] = Cost{0};
      reached[idx(source_)] = true;
      heap.emplace(Cost{0}, source_);
      while (!heap.empty()) {
        auto [du, u] = heap.top();
        heap.pop();
        if (done[idx(u)]) continue;
        done[idx(u)] = true;
        for (int e : adj_[idx(u)]) {
          const ResidualArc& ra = arcs_[idx(e)];
          if (ra.cap == 0 || done[idx(ra.to)]) continue;
          Cost nd = du + ra.cost + potential[idx(u)] - potential[idx(ra.to)];
          if (!reached[idx(ra.to)] || nd < dist[idx(ra.to)]) {
            reached[idx(ra.to)] = true;
            dist[idx(ra.to)] = nd;
            parent_arc[idx(ra.to)] = e;
            heap.emplace(std::move(nd), ra.to);
          }
        }
      }
      if (!reached[idx(sink_)]) return std::nullopt;

      // Unreached vertices stay unreachable: augmentation only adds residual
      // arcs between reached vertices.
      for (int v = 0; v < n_; ++v) {
        if (reached[idx(v)]) potential[idx(v)] += dist[idx(v)];
      }
      for (int v = sink_; v != source_;) {
        const int e = parent_arc[idx(v)];
        arcs_[idx(e)].cap -= 1;
        arcs_[idx(e ^ 1)].cap += 1;
        v = arcs_[idx(e ^ 1)].to;
      }
    }

    DirectedSubgraph support(g_.edge_count());
    for (const auto& [a, e] : arc_slot_) {
      if (arcs_[idx(e)].cap == 0) support.insert(a);
    }
    return support;
  }

 private:
  struct ResidualArc {
    int to;
    std::int64_t cap;
    Cost cost;
  };

  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

  int add_arc(int from, int to, std::int64_t cap, Cost cost) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back(ResidualArc{to, cap, cost});
    arcs_.push_back(ResidualArc{from, 0, -cost});
    adj_[idx(from)].push_back(id);
    adj_[idx(to)].push_back(id + 1);
    return id;
  }

  const WeightedGraph& g_;
  const Demand& dem_;
  int n_;
  int source_;
  int sink_;
  std::vector<std::vector<int>> adj_;
  std::vector<ResidualArc> arcs_;
  std::vector<std::pair<ArcId, int>> arc_slot_;
};

inline IntegralFlow finish(const WeightedGraph& g, DirectedSubgraph support) {
  for (std::size_t i = 0; i < support.edge_count(); ++i) {
    if (support.slot_arity(i) == 2) {
      throw std::logic_error("min-cost flow support holds an antiparallel pair");
    }
  }
  LexCost cost = lex_cost(g, support);
  return IntegralFlow{std::move(support), std::move(cost)};
}

}  // namespace detail

/// Solver with an explicit cost representation (std::int64_t or BigInt).
/// std::int64_t is only valid when detail::fits_int64 holds.
template <typename Cost>
std::optional<IntegralFlow> min_cost_flow_with(const WeightedGraph& g, const DirectedSubgraph& d,
                                               const Demand& dem) {
  detail::check_inputs(g, d, dem);
  auto support = detail::SuccessiveShortestPaths<Cost>(g, d, dem).solve();
  if (!support) return std::nullopt;
  return detail::finish(g, std::move(*support));
}

/// A(D): the unique lexicographically cheapest integral d-flow supported on D,
/// or nullopt when no d-flow exists on D.
inline std::optional<IntegralFlow> min_cost_flow(const WeightedGraph& g,
                                                 const DirectedSubgraph& d, const Demand& dem) {
  detail::check_inputs(g, d, dem);
  if (detail::fits_int64(g, d)) return min_cost_flow_with<std::int64_t>(g, d, dem);
  return min_cost_flow_with<BigInt>(g, d, dem);
}

inline bool feasible(const WeightedGraph& g, const DirectedSubgraph& d, const Demand& dem) {
  return min_cost_flow(g, d, dem).has_value();
}

}  // namespace orientflow
