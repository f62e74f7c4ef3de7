// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "orientflow/orientflow.hpp"
#include "test_support.hpp"

namespace of = orientflow;
using of::ArcSetKind;
using of::Demand;
using of::DirectedSubgraph;
using of::WeightedGraph;

namespace {

constexpr double kGridSeconds = 60.0;
constexpr double kPhiSeconds = 10.0;
constexpr std::size_t kLemmaExhaustiveMaxEdges = 5;
constexpr std::size_t kLemmaSampledPairs = 10000;
constexpr int kLemmaMaxVertices = 8;
constexpr std::size_t kLemmaMaxEdges = 12;
constexpr std::int64_t kLemmaMinWeight = 1;
constexpr std::int64_t kLemmaMaxWeight = 100;
constexpr std::size_t kOracleExhaustiveMaxEdges = 5;
constexpr std::size_t kOracleRandomInstances = 1000;
constexpr std::size_t kOracleRandomMaxEdges = 11;
constexpr int kPerfVertices = 100;
constexpr std::size_t kPerfEdges = 300;
constexpr int kPerfK = 3;
constexpr std::uint64_t kCirculationSeed = 2024;
constexpr std::uint64_t kLemmaSeed = 4;
constexpr std::uint64_t kOracleSeed = 5;
constexpr std::uint64_t kPerfSeed = 7;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Fixture {
  std::string name;
  std::string file;
  WeightedGraph g;
};

struct Case {
  const Fixture* fixture;
  std::string label;
  Demand demand;
  int s = 0, t = 0, k = 0;  // st demands only
};

std::vector<Fixture> fixtures() {
  namespace t = of::testing;
  return {{"edge", "edge.g", t::edge_graph()},
          {"tri", "tri.g", t::tri_graph()},
          {"diamond", "diamond.g", t::diamond_graph()},
          {"k4", "k4.g", t::k4_graph()},
          {"p4", "p4.g", t::p4_graph()}};
}

std::vector<Case> grid(const std::vector<Fixture>& fx) {
  std::vector<Case> out;
  std::mt19937_64 rng(kCirculationSeed);
  for (const auto& f : fx) {
    const int n = f.g.vertex_count();
    for (int k = 1; k <= 2; ++k) {
      for (int s = 1; s <= n; ++s) {
        for (int t = 1; t <= n; ++t) {
          if (s == t) continue;
          out.push_back({&f,
                         f.name + " st " + std::to_string(s) + " " + std::to_string(t) + " " +
                             std::to_string(k),
                         of::st_demand(n, s, t, k), s, t, k});
        }
      }
    }
    out.push_back({&f, f.name + " zero", Demand::zero(n)});
    out.push_back({&f, f.name + " circulation", of::testing::random_circulation(rng, f.g)});
  }
  return out;
}

// Feasible masks decided by the brute-force oracle, independent of the solver.
std::vector<std::string> oracle_feasible(const WeightedGraph& g, const Demand& d, ArcSetKind kind) {
  std::vector<std::string> out;
  const std::size_t m = g.edge_count();
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
    const std::string mask = of::mask_from_index(x, m);
    const auto set = kind == ArcSetKind::Subgraph ? of::decode_subgraph(mask, m)
                                                  : of::decode_orientation(mask, m);
    if (of::brute_force_mcf(g, set, d)) out.push_back(mask);
  }
  return out;
}

class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && first_.empty()) first_ = what;
    failures_ += ok ? 0 : 1;
  }
  bool ok() const { return failures_ == 0; }
  std::size_t checks() const { return checks_; }
  std::string summary() const {
    std::ostringstream os;
    os << "checks=" << checks_ << " failures=" << failures_;
    if (!first_.empty()) os << " first=[" << first_ << "]";
    return os.str();
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string first_;
};

bool report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::cout << "criterion " << id << ' ' << (pass ? "PASS" : "FAIL") << ' ' << name << ": "
            << detail << std::endl;
  return pass;
}

bool same_flow(const std::optional<of::IntegralFlow>& a, const std::optional<of::IntegralFlow>& b) {
  return a.has_value() == b.has_value() && (!a || *a == *b);
}

// 1-3 and 6 walk the same grid, so they share one pass.
struct GridResults {
  Tally counting, bijective, flow, paths;
  double seconds = 0;
  std::size_t cases = 0;
};

GridResults run_grid(const std::vector<Case>& cases) {
  GridResults r;
  const auto start = Clock::now();
  const std::map<std::string, std::size_t> pinned = {
      {"tri st 1 3 1", 5}, {"diamond st 1 4 2", 2}, {"edge st 1 2 1", 1}, {"edge st 2 1 1", 1}};

  for (const Case& c : cases) {
    ++r.cases;
    const WeightedGraph& g = c.fixture->g;
    const std::size_t m = g.edge_count();
    const auto subs = oracle_feasible(g, c.demand, ArcSetKind::Subgraph);
    const auto oris = oracle_feasible(g, c.demand, ArcSetKind::Orientation);

    r.counting.check(subs.size() == oris.size(),
                     c.label + " S_f=" + std::to_string(subs.size()) +
                         " O_f=" + std::to_string(oris.size()));
    r.counting.check(of::enumerate_feasible(g, c.demand, ArcSetKind::Subgraph) == subs &&
                         of::enumerate_feasible(g, c.demand, ArcSetKind::Orientation) == oris,
                     c.label + " enumeration differs from oracle");
    if (auto it = pinned.find(c.label); it != pinned.end()) {
      r.counting.check(subs.size() == it->second && oris.size() == it->second,
                       c.label + " expected " + std::to_string(it->second));
    }
    if (c.demand.is_zero()) {
      r.counting.check(subs.size() == (std::size_t{1} << m), c.label + " expected 2^m");
    }

    std::set<std::string> images;
    for (const std::string& mask : subs) {
      const DirectedSubgraph k = of::decode_subgraph(mask, m);
      const auto flow = of::brute_force_mcf(g, k, c.demand);
      try {
        const of::MapResult fwd = of::phi(g, c.demand, k);
        const bool oriented = of::classify(fwd.image) == ArcSetKind::Orientation || m == 0;
        r.bijective.check(oriented, c.label + " phi(" + mask + ") not an orientation");
        if (oriented) images.insert(of::encode_orientation(fwd.image));
        r.bijective.check(of::psi(g, c.demand, fwd.image).image == k,
                          c.label + " psi(phi(" + mask + "))");

        const auto image_flow = of::brute_force_mcf(g, fwd.image, c.demand);
        r.flow.check(same_flow(image_flow, flow) && image_flow->cost.base == flow->cost.base,
                     c.label + " A(phi(" + mask + "))");
        DirectedSubgraph d = k;
        for (std::size_t i = 0; i < m; ++i) {
          d = of::phi_step(g, c.demand, d, i).image;
          r.flow.check(same_flow(of::brute_force_mcf(g, d, c.demand), flow),
                       c.label + " K=" + mask + " after phi step " + std::to_string(i + 1));
        }

        if (c.k > 0) {
          const auto before = of::k_disjoint_paths(g, k, c.s, c.t, c.k);
          const auto after = of::k_disjoint_paths(g, fwd.image, c.s, c.t, c.k);
          r.paths.check(before.has_value() && before == after,
                        c.label + " paths of K=" + mask);
        }
      } catch (const of::Error& e) {
        r.bijective.check(false, c.label + " K=" + mask + " " + e.what());
      }
    }
    r.bijective.check(images.size() == subs.size() &&
                          std::vector<std::string>(images.begin(), images.end()) == oris,
                      c.label + " phi(S_f) != O_f");

    for (const std::string& mask : oris) {
      const DirectedSubgraph l = of::decode_orientation(mask, m);
      const auto flow = of::brute_force_mcf(g, l, c.demand);
      try {
        const of::MapResult back = of::psi(g, c.demand, l);
        r.bijective.check(of::classify(back.image) == ArcSetKind::Subgraph,
                          c.label + " psi(" + mask + ") not a subgraph");
        r.bijective.check(of::phi(g, c.demand, back.image).image == l,
                          c.label + " phi(psi(" + mask + "))");
        r.flow.check(same_flow(of::brute_force_mcf(g, back.image, c.demand), flow),
                     c.label + " A(psi(" + mask + "))");
        DirectedSubgraph d = l;
        for (std::size_t i = m; i-- > 0;) {
          d = of::psi_step(g, c.demand, d, i).image;
          r.flow.check(same_flow(of::brute_force_mcf(g, d, c.demand), flow),
                       c.label + " L=" + mask + " after psi step " + std::to_string(i + 1));
        }
      } catch (const of::Error& e) {
        r.bijective.check(false, c.label + " L=" + mask + " " + e.what());
      }
    }
  }
  r.seconds = since(start);
  return r;
}

using FlowOpt = std::optional<of::IntegralFlow>;

void check_lemmas(Tally& lemma1, Tally& lemma2, const WeightedGraph& g, const Demand& d,
                  const DirectedSubgraph& set, const FlowOpt& flow, std::size_t edge,
                  bool all_support_arcs) {
  const of::ArcId e = of::reference_arc(edge);
  const bool fwd = of::min_cost_flow(g, of::orient_insert(set, e), d) == flow;
  const bool bwd = of::min_cost_flow(g, of::orient_insert(set, e.reversed()), d) == flow;
  lemma1.check(fwd || bwd, "D=" + set.arc_string() + " e=" + std::to_string(edge + 1));
  if (!all_support_arcs) return;
  for (of::ArcId a : flow->support.arcs()) {
    lemma2.check(of::min_cost_flow(g, of::pair_insert(set, a), d) == flow,
                 "D=" + set.arc_string() + " arc=" + of::format_arc(g.arc(a)));
  }
}

bool criterion_lemmas(const std::vector<Case>& cases) {
  Tally ex1, ex2, sm1, sm2;
  for (const Case& c : cases) {
    const WeightedGraph& g = c.fixture->g;
    if (g.edge_count() > kLemmaExhaustiveMaxEdges) continue;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << g.arc_count()); ++x) {
      DirectedSubgraph set(g.edge_count());
      for (std::size_t i = 0; i < g.arc_count(); ++i) {
        if ((x >> i) & 1U) set.insert(of::ArcId{i});
      }
      const FlowOpt flow = of::min_cost_flow(g, set, c.demand);
      if (!flow) continue;
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        check_lemmas(ex1, ex2, g, c.demand, set, flow, e, e == 0);
      }
    }
  }

  // Sampled: one (D, e) pair per draw for Lemma 1, every (D, a in A(D)) for
  // Lemma 2, until both reach the quota.
  std::mt19937_64 rng(kLemmaSeed);
  while (sm1.checks() < kLemmaSampledPairs || sm2.checks() < kLemmaSampledPairs) {
    const int n = 2 + static_cast<int>(rng() % (kLemmaMaxVertices - 1));
    const std::size_t m = 1 + rng() % kLemmaMaxEdges;
    const WeightedGraph g =
        of::testing::random_graph(rng, n, m, kLemmaMinWeight, kLemmaMaxWeight);
    const DirectedSubgraph set = of::testing::random_arc_set(rng, g.edge_count());
    const Demand d = of::testing::random_circulation(rng, g, set);
    const FlowOpt flow = of::min_cost_flow(g, set, d);
    if (!flow) continue;
    check_lemmas(sm1, sm2, g, d, set, flow, rng() % g.edge_count(), true);
  }

  const bool pass = ex1.ok() && ex2.ok() && sm1.ok() && sm2.ok() && ex1.checks() > 0;
  return report(4, "lemma suite", pass,
                "exhaustive(m<=" + std::to_string(kLemmaExhaustiveMaxEdges) + ") lemma1 " +
                    ex1.summary() + ", lemma2 " + ex2.summary() + "; sampled(seed=" +
                    std::to_string(kLemmaSeed) + ") lemma1 " + sm1.summary() + ", lemma2 " +
                    sm2.summary());
}

bool criterion_oracle(const std::vector<Case>& cases) {
  Tally fixture_tally, random_tally;
  for (const Case& c : cases) {
    const WeightedGraph& g = c.fixture->g;
    if (g.edge_count() > kOracleExhaustiveMaxEdges) continue;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << g.arc_count()); ++x) {
      DirectedSubgraph set(g.edge_count());
      for (std::size_t i = 0; i < g.arc_count(); ++i) {
        if ((x >> i) & 1U) set.insert(of::ArcId{i});
      }
      fixture_tally.check(
          same_flow(of::min_cost_flow(g, set, c.demand), of::brute_force_mcf(g, set, c.demand)),
          c.label + " D=" + set.arc_string());
    }
  }

  std::mt19937_64 rng(kOracleSeed);
  std::size_t feasible = 0;
  for (std::size_t trial = 0; trial < kOracleRandomInstances; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const std::size_t m = 1 + rng() % kOracleRandomMaxEdges;
    const WeightedGraph g = of::testing::random_graph(rng, n, m, 1, 100);
    const DirectedSubgraph set = of::testing::random_arc_set(rng, g.edge_count());
    // Alternate demands guaranteed feasible on D with ones drawn from all of G.
    const Demand d = (trial % 2 == 0) ? of::testing::random_circulation(rng, g, set)
                                      : of::testing::random_circulation(rng, g);
    const FlowOpt got = of::min_cost_flow(g, set, d);
    feasible += got.has_value();
    random_tally.check(same_flow(got, of::brute_force_mcf(g, set, d)),
                       of::format_graph(g) + "D=" + set.arc_string());
  }

  return report(5, "solver equals oracle", fixture_tally.ok() && random_tally.ok(),
                "fixtures(m<=" + std::to_string(kOracleExhaustiveMaxEdges) + ") " +
                    fixture_tally.summary() + "; random(seed=" + std::to_string(kOracleSeed) +
                    ", m<=" + std::to_string(kOracleRandomMaxEdges) + ") " +
                    random_tally.summary() + " feasible=" + std::to_string(feasible));
}

bool criterion_performance() {
  std::mt19937_64 rng(kPerfSeed);
  const WeightedGraph g = of::testing::random_graph(rng, kPerfVertices, kPerfEdges, 1, 100, true);
  const DirectedSubgraph all = DirectedSubgraph::full(g.edge_count());
  int s = 0, t = 0;
  for (int a = 1; a <= kPerfVertices && s == 0; ++a) {
    for (int b = 1; b <= kPerfVertices && s == 0; ++b) {
      if (a != b && of::feasible(g, all, of::st_demand(kPerfVertices, a, b, kPerfK))) {
        s = a;
        t = b;
      }
    }
  }
  const auto start = Clock::now();
  const of::MapResult r = of::phi(g, of::st_demand(kPerfVertices, s, t, kPerfK), all);
  const double seconds = since(start);
  const std::size_t budget = 2 * g.edge_count() + 1;
  const bool pass = g.edge_count() == kPerfEdges && seconds < kPhiSeconds &&
                    r.solver_calls <= budget &&
                    of::classify(r.image) == ArcSetKind::Orientation;
  std::ostringstream os;
  os << "n=" << g.vertex_count() << " m=" << g.edge_count() << " k=" << kPerfK << " s=" << s
     << " t=" << t << " seconds=" << seconds << " (limit " << kPhiSeconds
     << ") solver_calls=" << r.solver_calls << " (limit " << budget << ")";
  return report(7, "performance", pass, os.str());
}

std::string shell_quote(const std::string& s) { return "'" + s + "'"; }

std::optional<std::string> run_process(const std::vector<std::string>& args) {
  std::string cmd = shell_quote(ORIENTFLOW_CLI);
  for (const auto& a : args) cmd += ' ' + shell_quote(a);
  cmd += " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return std::nullopt;
  std::string out;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  pclose(pipe);
  return out;
}

std::string run_in_process(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = of::cli::run(args, out, err);
  return out.str() + err.str() + "exit " + std::to_string(code) + "\n";
}

bool criterion_determinism(const std::vector<Case>& cases) {
  const std::string dir = ORIENTFLOW_DATA_DIR;
  std::vector<std::vector<std::string>> commands;
  for (const Case& c : cases) {
    if (c.k == 0 && !c.demand.is_zero()) continue;  // random circulations have no file
    const std::string graph = dir + "/" + c.fixture->file;
    std::vector<std::string> demand = c.k > 0 ? std::vector<std::string>{"--st", std::to_string(c.s),
                                                                         std::to_string(c.t),
                                                                         std::to_string(c.k)}
                                              : std::vector<std::string>{"--demand", dir + "/zero.d"};
    auto with = [&](std::vector<std::string> head, std::vector<std::string> tail = {}) {
      head.insert(head.end(), demand.begin(), demand.end());
      head.insert(head.end(), tail.begin(), tail.end());
      commands.push_back(std::move(head));
    };
    const std::string ones(c.fixture->g.edge_count(), '1');
    with({"count", graph});
    with({"solve", graph});
    with({"orient", graph}, {"--subgraph", ones, "--trace"});
    with({"underlying", graph}, {"--orientation", ones, "--trace", "--json"});
    if (c.fixture->g.edge_count() <= kLemmaExhaustiveMaxEdges) with({"verify", graph});
    with({"verify", graph}, {"--sampled", "--seed", "3", "--trials", "20", "--json"});
    if (c.k > 0) with({"paths", graph});
  }

  Tally in_process, processes;
  for (const auto& cmd : commands) {
    const std::string a = run_in_process(cmd);
    const std::string b = run_in_process(cmd);
    std::string label;
    for (const auto& x : cmd) label += x + ' ';
    in_process.check(a == b, label);
  }
  // A process-level sample: every fifth command through the real binary.
  for (std::size_t i = 0; i < commands.size(); i += 5) {
    const auto a = run_process(commands[i]);
    const auto b = run_process(commands[i]);
    processes.check(a && b && !a->empty() && *a == *b, commands[i].front());
  }
  return report(8, "determinism", in_process.ok() && processes.ok(),
                "commands=" + std::to_string(commands.size()) + " in-process " +
                    in_process.summary() + "; separate processes " + processes.summary());
}

}  // namespace

int main() {
  const std::vector<Fixture> fx = fixtures();
  const std::vector<Case> cases = grid(fx);

  const GridResults r = run_grid(cases);
  bool all = true;
  std::ostringstream timing;
  timing << " cases=" << r.cases << " seconds=" << r.seconds << " (limit " << kGridSeconds << ")";
  all &= report(1, "counting identity", r.counting.ok() && r.seconds < kGridSeconds,
                r.counting.summary() + timing.str());
  all &= report(2, "bijectivity", r.bijective.ok(), r.bijective.summary());
  all &= report(3, "flow preservation", r.flow.ok(), r.flow.summary());
  all &= criterion_lemmas(cases);
  all &= criterion_oracle(cases);
  all &= report(6, "path preservation", r.paths.ok() && r.paths.checks() > 0, r.paths.summary());
  all &= criterion_performance();
  all &= criterion_determinism(cases);
  return all ? 0 : 1;
}
