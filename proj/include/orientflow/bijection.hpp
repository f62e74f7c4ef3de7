#pragma once

// Flow-preserving bijection between feasible subgraphs and feasible
// orientations.
//
// phi orients slots 0, 1, ..., m-1 in turn; psi decides pair-or-nothing for
// slots m-1, ..., 0. Each step keeps A(D) unchanged. Rules per step, with
// e = reference arc of the slot and A = min_cost_flow:
//
//   phi_i:  1. A(D) != A(D (+) e)     -> D (+) rev(e)
//           2. A(D) != A(D (+) rev e) -> D (+) e
//           3. e in D                 -> D (+) e
//           4. otherwise              -> D (+) rev(e)
//
//   psi_i:  1. A(D) != A(D + e)       -> D - e
//           2. A(D) != A(D - e)       -> D + e
//           3. e in D                 -> D + e
//           4. otherwise              -> D - e
//
// An infeasible set never equals A(D). Rules 1 and 2 are mutually exclusive;
// a conflict raises RuleConflict instead of being silently resolved.
//
// The maps depend on the edge order and reference orientation of the graph.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "orientflow/demand.hpp"
#include "orientflow/errors.hpp"
#include "orientflow/flow.hpp"
#include "orientflow/graph.hpp"

namespace orientflow {

struct StepRecord {
  std::size_t edge = 0;  // 0-based slot
  int rule = 0;          // 1..4
  /// phi: the arc left at the slot. psi: the slot's reference arc.
  ArcId arc;
  /// psi only: whether the pair was kept.
  bool paired = false;
};

struct StepResult {
  DirectedSubgraph image;
  StepRecord record;
};

struct MapResult {
  DirectedSubgraph image;
  IntegralFlow flow;  // A(input) == A(image)
  std::vector<StepRecord> steps;
  std::size_t solver_calls = 0;
};

namespace detail {

class CountingSolver {
 public:
  CountingSolver(const WeightedGraph& g, const Demand& d) : g_(g), d_(d) {}

  std::optional<IntegralFlow> operator()(const DirectedSubgraph& arcs) {
    ++calls_;
    return min_cost_flow(g_, arcs, d_);
  }

  IntegralFlow require(const DirectedSubgraph& arcs) {
    auto f = (*this)(arcs);
    if (!f) throw InfeasibleInput("no d-flow exists on the given arc set");
    return std::move(*f);
  }

  std::size_t calls() const noexcept { return calls_; }

 private:
  const WeightedGraph& g_;
  const Demand& d_;
  std::size_t calls_ = 0;
};

/// A(candidate) != A(d); skips the solve when the candidate is d itself.
inline bool flow_changes(CountingSolver& solve, const DirectedSubgraph& d,
                         const DirectedSubgraph& candidate, const IntegralFlow& current) {
  if (candidate == d) return false;
  auto f = solve(candidate);
  return !f || f->support != current.support;
}

inline void check_slot(const WeightedGraph& g, std::size_t edge) {
  if (edge >= g.edge_count()) {
    throw ArcError("edge slot " + std::to_string(edge) + " out of range");
  }
}

inline StepResult phi_step_known(CountingSolver& solve, const DirectedSubgraph& d,
                                 const IntegralFlow& current, std::size_t edge) {
  const ArcId e = reference_arc(edge);
  DirectedSubgraph forward = orient_insert(d, e);
  DirectedSubgraph backward = orient_insert(d, e.reversed());
  const bool rule1 = flow_changes(solve, d, forward, current);
  const bool rule2 = flow_changes(solve, d, backward, current);
  if (rule1 && rule2) {
    throw RuleConflict("phi step " + std::to_string(edge + 1) + ": rules 1 and 2 both fire");
  }
  if (rule1) return {std::move(backward), {edge, 1, e.reversed(), false}};
  if (rule2) return {std::move(forward), {edge, 2, e, false}};
  if (d.contains(e)) return {std::move(forward), {edge, 3, e, false}};
  return {std::move(backward), {edge, 4, e.reversed(), false}};
}

inline StepResult psi_step_known(CountingSolver& solve, const DirectedSubgraph& d,
                                 const IntegralFlow& current, std::size_t edge) {
  const ArcId e = reference_arc(edge);
  DirectedSubgraph with_pair = pair_insert(d, e);
  DirectedSubgraph without_pair = pair_remove(d, e);
  const bool rule1 = flow_changes(solve, d, with_pair, current);
  const bool rule2 = flow_changes(solve, d, without_pair, current);
  if (rule1 && rule2) {
    throw RuleConflict("psi step " + std::to_string(edge + 1) + ": rules 1 and 2 both fire");
  }
  if (rule1) return {std::move(without_pair), {edge, 1, e, false}};
  if (rule2) return {std::move(with_pair), {edge, 2, e, true}};
  if (d.contains(e)) return {std::move(with_pair), {edge, 3, e, true}};
  return {std::move(without_pair), {edge, 4, e, false}};
}

}  // namespace detail

/// One phi_i step on any feasible arc set. Leaves exactly one arc at `edge`.
inline StepResult phi_step(const WeightedGraph& g, const Demand& dem, const DirectedSubgraph& d,
                           std::size_t edge) {
  detail::check_slot(g, edge);
  detail::CountingSolver solve(g, dem);
  const IntegralFlow current = solve.require(d);
  return detail::phi_step_known(solve, d, current, edge);
}

/// One psi_i step on any feasible arc set. Leaves zero or two arcs at `edge`.
inline StepResult psi_step(const WeightedGraph& g, const Demand& dem, const DirectedSubgraph& d,
                           std::size_t edge) {
  detail::check_slot(g, edge);
  detail::CountingSolver solve(g, dem);
  const IntegralFlow current = solve.require(d);
  return detail::psi_step_known(solve, d, current, edge);
}

/// phi: feasible subgraph -> feasible orientation with the same min-cost flow.
inline MapResult phi(const WeightedGraph& g, const Demand& dem, const DirectedSubgraph& subgraph) {
  if (subgraph.edge_count() != g.edge_count()) throw ArcError("arc set does not match graph");
  if (classify(subgraph) != ArcSetKind::Subgraph) {
    throw NotASubgraph("phi expects a subgraph (0 or 2 arcs per edge)");
  }
  detail::CountingSolver solve(g, dem);
  MapResult out{subgraph, solve.require(subgraph), {}, 0};
  out.steps.reserve(g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    StepResult step = detail::phi_step_known(solve, out.image, out.flow, i);
    out.image = std::move(step.image);
    out.steps.push_back(step.record);
  }
  out.solver_calls = solve.calls();
  return out;
}

/// psi: feasible orientation -> feasible subgraph with the same min-cost flow.
inline MapResult psi(const WeightedGraph& g, const Demand& dem,
                     const DirectedSubgraph& orientation) {
  if (orientation.edge_count() != g.edge_count()) throw ArcError("arc set does not match graph");
  if (g.edge_count() != 0 && classify(orientation) != ArcSetKind::Orientation) {
    throw NotAnOrientation("psi expects an orientation (1 arc per edge)");
  }
  detail::CountingSolver solve(g, dem);
  MapResult out{orientation, solve.require(orientation), {}, 0};
  out.steps.reserve(g.edge_count());
  for (std::size_t i = g.edge_count(); i-- > 0;) {
    StepResult step = detail::psi_step_known(solve, out.image, out.flow, i);
    out.image = std::move(step.image);
    out.steps.push_back(step.record);
  }
  out.solver_calls = solve.calls();
  return out;
}

}  // namespace orientflow
