#pragma once

// Brute-force oracles and exhaustive / sampled verification of the bijection
// and the lemmas it relies on. Everything here is exponential and meant for
// desk-scale graphs.

#include <bit>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "orientflow/bijection.hpp"
#include "orientflow/demand.hpp"
#include "orientflow/errors.hpp"
#include "orientflow/flow.hpp"
#include "orientflow/graph.hpp"

namespace orientflow {

/// Lexicographically cheapest subset of D satisfying conservation, found by
/// trying every subset in Gray-code order. Independent of the flow solver.
inline std::optional<IntegralFlow> brute_force_mcf(const WeightedGraph& g,
                                                   const DirectedSubgraph& d, const Demand& dem,
                                                   std::size_t max_arcs = 22) {
  detail::check_inputs(g, d, dem);
  const std::vector<ArcId> arcs = d.arcs();
  if (arcs.size() > max_arcs || arcs.size() > 62) {
    throw CapExceeded("brute force over " + std::to_string(arcs.size()) + " arcs exceeds cap " +
                      std::to_string(max_arcs));
  }

  std::vector<std::int64_t> imbalance(static_cast<std::size_t>(g.vertex_count()) + 1, 0);
  std::size_t unbalanced = 0;
  for (Vertex v = 1; v <= g.vertex_count(); ++v) {
    imbalance[static_cast<std::size_t>(v)] = -dem[v];
    if (dem[v] != 0) ++unbalanced;
  }
  auto shift = [&](Vertex v, std::int64_t delta) {
    auto& x = imbalance[static_cast<std::size_t>(v)];
    if (x == 0) ++unbalanced;
    x += delta;
    if (x == 0) --unbalanced;
  };

  // Local bit j stands for arcs[j]; arcs is ascending in id, so comparing
  // local masks as integers compares the tiebreak sums.
  std::optional<std::pair<std::int64_t, std::uint64_t>> best;
  std::uint64_t mask = 0;
  std::int64_t base = 0;
  auto consider = [&] {
    if (unbalanced != 0) return;
    if (!best || base < best->first || (base == best->first && mask < best->second)) {
      best.emplace(base, mask);
    }
  };
  consider();
  const std::uint64_t total = std::uint64_t{1} << arcs.size();
  for (std::uint64_t step = 1; step < total; ++step) {
    const int bit = std::countr_zero(step);
    mask ^= std::uint64_t{1} << bit;
    const std::int64_t sign = (mask >> bit) & 1U ? 1 : -1;
    const Arc a = g.arc(arcs[static_cast<std::size_t>(bit)]);
    shift(a.tail, sign);
    shift(a.head, -sign);
    base += sign * g.weight(arcs[static_cast<std::size_t>(bit)]);
    consider();
  }
  if (!best) return std::nullopt;

  DirectedSubgraph support(g.edge_count());
  for (std::size_t j = 0; j < arcs.size(); ++j) {
    if ((best->second >> j) & 1U) support.insert(arcs[j]);
  }
  LexCost cost = lex_cost(g, support);
  return IntegralFlow{std::move(support), std::move(cost)};
}

/// Mask i of m characters read as a binary numeral, first character most
/// significant. Iterating i upward yields masks in ascending string order.
inline std::string mask_from_index(std::uint64_t index, std::size_t edge_count) {
  std::string s(edge_count, '0');
  for (std::size_t i = 0; i < edge_count; ++i) {
    if ((index >> (edge_count - 1 - i)) & 1U) s[i] = '1';
  }
  return s;
}

/// All feasible subgraph (or orientation) masks, ascending.
inline std::vector<std::string> enumerate_feasible(const WeightedGraph& g, const Demand& dem,
                                                   ArcSetKind kind, std::size_t max_edges = 20) {
  if (kind == ArcSetKind::Mixed) throw MaskError("only subgraphs and orientations are enumerated");
  const std::size_t m = g.edge_count();
  if (m > max_edges || m > 62) {
    throw CapExceeded(std::to_string(m) + " edges exceeds enumeration cap " +
                      std::to_string(max_edges));
  }
  std::vector<std::string> out;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
    std::string mask = mask_from_index(x, m);
    const DirectedSubgraph d =
        kind == ArcSetKind::Subgraph ? decode_subgraph(mask, m) : decode_orientation(mask, m);
    if (feasible(g, d, dem)) out.push_back(std::move(mask));
  }
  return out;
}

enum class VerifyMode { Exhaustive, Sampled };

struct VerifyOptions {
  VerifyMode mode = VerifyMode::Exhaustive;
  std::uint64_t seed = 1;
  std::size_t trials = 1000;
  /// Exhaustive mode walks all 4^m arc subsets.
  std::size_t max_edges = 8;
  std::size_t oracle_max_arcs = 22;
  /// Sampled mode: draws per trial before giving up on finding a feasible set.
  std::size_t rejection_cap = 1000;
};

struct ClaimResult {
  std::string id;
  bool pass = true;
  std::size_t checks = 0;
  std::optional<std::string> witness;  // first counterexample
};

struct VerificationReport {
  int vertex_count = 0;
  std::size_t edge_count = 0;
  std::vector<std::int64_t> demand;
  VerifyOptions options;
  std::optional<std::size_t> subgraph_count;    // |S_f|, exhaustive only
  std::optional<std::size_t> orientation_count; // |O_f|, exhaustive only
  std::vector<ClaimResult> claims;
  double seconds = 0.0;

  bool all_pass() const {
    for (const auto& c : claims) {
      if (!c.pass) return false;
    }
    return true;
  }

  const ClaimResult* claim(const std::string& id) const {
    for (const auto& c : claims) {
      if (c.id == id) return &c;
    }
    return nullptr;
  }
};

namespace detail {

class Verifier {
 public:
  Verifier(const WeightedGraph& g, const Demand& dem, const VerifyOptions& opt)
      : g_(g), dem_(dem), opt_(opt), rng_(opt.seed) {
    for (const char* id : {"solver_oracle", "lemma1", "lemma2", "step_inverse", "step_flow",
                           "rules_exclusive", "phi_into_orientations", "psi_into_subgraphs",
                           "phi_injective", "phi_onto", "counts_equal", "psi_phi_identity",
                           "phi_psi_identity", "flow_preserved"}) {
      claims_.emplace(id, claims_order_.size());
      claims_order_.push_back(ClaimResult{id, true, 0, std::nullopt});
    }
  }

  VerificationReport run() {
    const auto start = std::chrono::steady_clock::now();
    VerificationReport report;
    report.vertex_count = g_.vertex_count();
    report.edge_count = g_.edge_count();
    report.demand = dem_.values();
    report.options = opt_;

    if (opt_.mode == VerifyMode::Exhaustive) {
      if (g_.edge_count() > opt_.max_edges) {
        throw CapExceeded("exhaustive verification of " + std::to_string(g_.edge_count()) +
                          " edges exceeds cap " + std::to_string(opt_.max_edges));
      }
      const std::uint64_t subsets = std::uint64_t{1} << g_.arc_count();
      for (std::uint64_t x = 0; x < subsets; ++x) check_arc_set(arc_set_from_bits(x));
      run_subgraph_side(all_masks());
      run_orientation_side(all_masks());
      report.subgraph_count = subgraphs_.size();
      report.orientation_count = orientations_.size();
      record("counts_equal", subgraphs_.size() == orientations_.size(),
             "S_f=" + std::to_string(subgraphs_.size()) +
                 " O_f=" + std::to_string(orientations_.size()));
      record("phi_onto", images_ == orientations_, "image set differs from O_f");
    } else {
      for (std::size_t t = 0; t < opt_.trials; ++t) {
        if (auto d = sample_feasible_arc_set()) check_arc_set(*d, /*sampled=*/true);
      }
      std::vector<std::string> sub_masks;
      std::vector<std::string> ori_masks;
      for (std::size_t t = 0; t < opt_.trials; ++t) {
        sub_masks.push_back(random_mask());
        ori_masks.push_back(random_mask());
      }
      run_subgraph_side(sub_masks);
      run_orientation_side(ori_masks);
    }

    report.claims = claims_order_;
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  }

 private:
  using FlowOpt = std::optional<IntegralFlow>;

  void record(const std::string& id, bool ok, const std::string& witness) {
    ClaimResult& c = claims_order_[claims_.at(id)];
    ++c.checks;
    if (!ok && c.pass) {
      c.pass = false;
      c.witness = witness;
    }
  }

  static bool same_flow(const FlowOpt& a, const IntegralFlow& b) {
    return a && a->support == b.support && a->cost == b.cost;
  }

  std::string describe(const DirectedSubgraph& d, std::size_t edge) const {
    return "D=" + d.arc_string() + " e=" + std::to_string(edge + 1);
  }

  DirectedSubgraph arc_set_from_bits(std::uint64_t x) const {
    DirectedSubgraph d(g_.edge_count());
    for (std::size_t i = 0; i < g_.arc_count(); ++i) {
      if ((x >> i) & 1U) d.insert(ArcId{i});
    }
    return d;
  }

  std::vector<std::string> all_masks() const {
    std::vector<std::string> out;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << g_.edge_count()); ++x) {
      out.push_back(mask_from_index(x, g_.edge_count()));
    }
    return out;
  }

  std::string random_mask() {
    std::string s(g_.edge_count(), '0');
    for (auto& c : s) c = (rng_() & 1U) ? '1' : '0';
    return s;
  }

  std::optional<DirectedSubgraph> sample_feasible_arc_set() {
    for (std::size_t attempt = 0; attempt < opt_.rejection_cap; ++attempt) {
      DirectedSubgraph d(g_.edge_count());
      for (std::size_t i = 0; i < g_.arc_count(); ++i) {
        if (rng_() & 1U) d.insert(ArcId{i});
      }
      if (feasible(g_, d, dem_)) return d;
    }
    return std::nullopt;
  }

  // Claims quantified over arbitrary arc sets D: oracle agreement, the two
  // lemmas and the per-step inverse property.
  void check_arc_set(const DirectedSubgraph& d, bool sampled = false) {
    const FlowOpt flow = min_cost_flow(g_, d, dem_);
    if (d.size() <= opt_.oracle_max_arcs) {
      const FlowOpt oracle = brute_force_mcf(g_, d, dem_, opt_.oracle_max_arcs);
      const bool agree = flow.has_value() == oracle.has_value() && (!flow || *flow == *oracle);
      record("solver_oracle", agree, "D=" + d.arc_string());
    }
    if (!flow || g_.edge_count() == 0) return;

    std::vector<std::size_t> edges;
    if (sampled) {
      edges.push_back(static_cast<std::size_t>(rng_() % g_.edge_count()));
    } else {
      for (std::size_t i = 0; i < g_.edge_count(); ++i) edges.push_back(i);
    }

    for (std::size_t i : edges) {
      const ArcId e = reference_arc(i);
      const bool keep_fwd = same_flow(min_cost_flow(g_, orient_insert(d, e), dem_), *flow);
      const bool keep_bwd =
          same_flow(min_cost_flow(g_, orient_insert(d, e.reversed()), dem_), *flow);
      record("lemma1", keep_fwd || keep_bwd, describe(d, i));
      check_step_inverse(d, *flow, i);
    }
    for (ArcId a : flow->support.arcs()) {
      record("lemma2", same_flow(min_cost_flow(g_, pair_insert(d, a), dem_), *flow),
             "D=" + d.arc_string() + " arc=" + format_arc(g_.arc(a)));
    }
  }

  // psi_i(phi_i(D)) = D when slot i holds 0 or 2 arcs, phi_i(psi_i(D)) = D
  // when it holds exactly one.
  void check_step_inverse(const DirectedSubgraph& d, const IntegralFlow& flow, std::size_t i) {
    CountingSolver solve(g_, dem_);
    try {
      const bool paired = d.slot_arity(i) != 1;
      const StepResult there = paired ? phi_step_known(solve, d, flow, i)
                                      : psi_step_known(solve, d, flow, i);
      const FlowOpt there_flow = min_cost_flow(g_, there.image, dem_);
      record("step_flow", same_flow(there_flow, flow), describe(d, i));
      if (there_flow) {
        const StepResult back = paired ? psi_step_known(solve, there.image, *there_flow, i)
                                       : phi_step_known(solve, there.image, *there_flow, i);
        record("step_inverse", back.image == d, describe(d, i));
      }
      record("rules_exclusive", true, {});
    } catch (const RuleConflict& ex) {
      record("rules_exclusive", false, describe(d, i) + " " + ex.what());
    }
  }

  // Replays phi step by step, checking A after each step, and returns the
  // image; nullopt when a rule conflict was recorded.
  std::optional<DirectedSubgraph> traced_map(const DirectedSubgraph& start,
                                             const IntegralFlow& flow, bool forward) {
    try {
      const MapResult whole = forward ? phi(g_, dem_, start) : psi(g_, dem_, start);
      DirectedSubgraph d = start;
      const std::size_t m = g_.edge_count();
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = forward ? k : m - 1 - k;
        d = forward ? phi_step(g_, dem_, d, i).image : psi_step(g_, dem_, d, i).image;
        record("step_flow", same_flow(min_cost_flow(g_, d, dem_), flow), describe(d, i));
      }
      record("step_flow", d == whole.image, "stepwise replay differs from composed map");
      record("rules_exclusive", true, {});
      return whole.image;
    } catch (const RuleConflict& ex) {
      record("rules_exclusive", false, "start=" + start.arc_string() + " " + ex.what());
    } catch (const InfeasibleInput& ex) {
      record("step_flow", false, "start=" + start.arc_string() + " " + ex.what());
    }
    return std::nullopt;
  }

  void run_subgraph_side(const std::vector<std::string>& masks) {
    const std::size_t m = g_.edge_count();
    for (const std::string& mask : masks) {
      const DirectedSubgraph k = decode_subgraph(mask, m);
      const FlowOpt flow = min_cost_flow(g_, k, dem_);
      if (!flow) continue;
      subgraphs_.insert(mask);
      auto image = traced_map(k, *flow, true);
      if (!image) continue;
      const bool oriented = classify(*image) == ArcSetKind::Orientation || m == 0;
      const FlowOpt image_flow = min_cost_flow(g_, *image, dem_);
      record("phi_into_orientations", oriented && image_flow.has_value(), "K=" + mask);
      record("flow_preserved", same_flow(image_flow, *flow), "K=" + mask);
      if (!oriented) continue;
      const std::string image_mask = encode_orientation(*image);
      auto [it, fresh] = image_of_.emplace(image_mask, mask);
      record("phi_injective", fresh || it->second == mask,
             "K=" + mask + " K'=" + it->second + " -> " + image_mask);
      images_.insert(image_mask);
      if (!image_flow) continue;
      try {
        const MapResult back = psi(g_, dem_, *image);
        record("psi_phi_identity", back.image == k, "K=" + mask);
      } catch (const Error& ex) {
        record("psi_phi_identity", false, "K=" + mask + " " + ex.what());
      }
    }
  }

  void run_orientation_side(const std::vector<std::string>& masks) {
    const std::size_t m = g_.edge_count();
    for (const std::string& mask : masks) {
      const DirectedSubgraph l = decode_orientation(mask, m);
      const FlowOpt flow = min_cost_flow(g_, l, dem_);
      if (!flow) continue;
      orientations_.insert(mask);
      auto image = traced_map(l, *flow, false);
      if (!image) continue;
      const bool paired = classify(*image) == ArcSetKind::Subgraph;
      const FlowOpt image_flow = min_cost_flow(g_, *image, dem_);
      record("psi_into_subgraphs", paired && image_flow.has_value(), "L=" + mask);
      record("flow_preserved", same_flow(image_flow, *flow), "L=" + mask);
      if (!paired || !image_flow) continue;
      try {
        const MapResult back = phi(g_, dem_, *image);
        record("phi_psi_identity", back.image == l, "L=" + mask);
      } catch (const Error& ex) {
        record("phi_psi_identity", false, "L=" + mask + " " + ex.what());
      }
    }
  }

  const WeightedGraph& g_;
  const Demand& dem_;
  VerifyOptions opt_;
  std::mt19937_64 rng_;
  std::map<std::string, std::size_t> claims_;
  std::vector<ClaimResult> claims_order_;
  std::set<std::string> subgraphs_;
  std::set<std::string> orientations_;
  std::set<std::string> images_;
  std::map<std::string, std::string> image_of_;
};

}  // namespace detail

/// Checks every claim of the bijection on (g, d). Exhaustive mode covers all
/// arc sets, subgraphs and orientations; sampled mode is reproducible from
/// (seed, trials) and reports no counts.
inline VerificationReport verify_bijection(const WeightedGraph& g, const Demand& dem,
                                           const VerifyOptions& options = {}) {
  return detail::Verifier(g, dem, options).run();
}

/// One line per claim: `<id> PASS|FAIL checks=<n> [witness]`.
inline std::string format_report(const VerificationReport& r, bool timing = false) {
  std::ostringstream os;
  os << "graph n=" << r.vertex_count << " m=" << r.edge_count << '\n';
  os << "demand";
  for (auto x : r.demand) os << ' ' << x;
  os << '\n';
  if (r.options.mode == VerifyMode::Exhaustive) {
    os << "mode exhaustive\n";
  } else {
    os << "mode sampled seed=" << r.options.seed << " trials=" << r.options.trials << '\n';
  }
  if (r.subgraph_count) os << "S_f " << *r.subgraph_count << '\n';
  if (r.orientation_count) os << "O_f " << *r.orientation_count << '\n';
  for (const auto& c : r.claims) {
    os << c.id << (c.pass ? " PASS" : " FAIL") << " checks=" << c.checks;
    if (c.witness) os << ' ' << *c.witness;
    os << '\n';
  }
  if (timing) os << "time " << r.seconds << '\n';
  return os.str();
}

}  // namespace orientflow
