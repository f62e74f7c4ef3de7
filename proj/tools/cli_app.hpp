#pragma once

// Command-line front end. Exit codes: 0 success, 1 input error,
// 2 infeasible, 3 verification failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "orientflow/orientflow.hpp"

namespace orientflow::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kInfeasible = 2, kVerifyFailed = 3 };

struct Inputs {
  std::string graph_file;
  std::string demand_file;
  std::vector<int> st;  // s t k
  std::string subgraph;
  std::string orientation;
  bool json = false;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Demand load_demand(const Inputs& in, const WeightedGraph& g) {
  if (!in.st.empty()) return st_demand(g.vertex_count(), in.st[0], in.st[1], in.st[2]);
  if (!in.demand_file.empty()) return parse_demand(read_file(in.demand_file), g.vertex_count());
  throw DemandError("a demand is required: use --demand <file> or --st <s> <t> <k>");
}

/// D restricted by --subgraph / --orientation, all arcs otherwise.
inline DirectedSubgraph load_arc_set(const Inputs& in, const WeightedGraph& g) {
  if (!in.subgraph.empty()) return decode_subgraph(in.subgraph, g.edge_count());
  if (!in.orientation.empty()) return decode_orientation(in.orientation, g.edge_count());
  return DirectedSubgraph::full(g.edge_count());
}

inline int report_infeasible(const Inputs& in, std::ostream& out) {
  if (in.json) {
    out << nlohmann::json{{"error", "infeasible"}}.dump() << '\n';
  } else {
    out << "infeasible\n";
  }
  return kInfeasible;
}

inline int cmd_solve(const Inputs& in, std::ostream& out) {
  const WeightedGraph g = parse_graph(read_file(in.graph_file));
  const Demand d = load_demand(in, g);
  const auto flow = min_cost_flow(g, load_arc_set(in, g), d);
  if (!flow) return report_infeasible(in, out);
  std::vector<std::string> arcs;
  for (ArcId a : flow->support.arcs()) arcs.push_back(format_arc(g.arc(a)));
  if (in.json) {
    out << nlohmann::json{{"arcs", arcs}, {"base_cost", flow->cost.base}}.dump() << '\n';
  } else {
    for (const auto& a : arcs) out << a << '\n';
    out << "cost " << flow->cost.base << '\n';
  }
  return kOk;
}

inline int cmd_map(const Inputs& in, bool to_orientation, bool trace, std::ostream& out) {
  const WeightedGraph g = parse_graph(read_file(in.graph_file));
  const Demand d = load_demand(in, g);
  MapResult r;
  std::string mask;
  if (to_orientation) {
    r = phi(g, d, decode_subgraph(in.subgraph, g.edge_count()));
    mask = encode_orientation(r.image);
  } else {
    r = psi(g, d, decode_orientation(in.orientation, g.edge_count()));
    mask = encode_subgraph(r.image);
  }

  auto step_word = [&](const StepRecord& s) -> std::string {
    if (to_orientation) return "arc";
    return s.paired ? "pair" : "drop";
  };
  if (in.json) {
    nlohmann::json doc{{"mask", mask}};
    if (trace) {
      nlohmann::json steps = nlohmann::json::array();
      for (const auto& s : r.steps) {
        steps.push_back({{"step", s.edge + 1},
                         {"rule", s.rule},
                         {step_word(s), format_arc(g.arc(s.arc))}});
      }
      doc["steps"] = steps;
    }
    out << doc.dump() << '\n';
    return kOk;
  }
  out << mask << '\n';
  if (trace) {
    for (const auto& s : r.steps) {
      out << "step " << s.edge + 1 << " rule " << s.rule << ' ' << step_word(s) << ' '
          << format_arc(g.arc(s.arc)) << '\n';
    }
  }
  return kOk;
}

inline int cmd_count(const Inputs& in, std::size_t cap, std::ostream& out) {
  const WeightedGraph g = parse_graph(read_file(in.graph_file));
  const Demand d = load_demand(in, g);
  const auto subs = enumerate_feasible(g, d, ArcSetKind::Subgraph, cap).size();
  const auto oris = enumerate_feasible(g, d, ArcSetKind::Orientation, cap).size();
  if (in.json) {
    out << nlohmann::json{{"S_f", subs}, {"O_f", oris}}.dump() << '\n';
  } else {
    out << "S_f " << subs << "\nO_f " << oris << '\n';
  }
  return subs == oris ? kOk : kVerifyFailed;
}

inline nlohmann::json report_json(const VerificationReport& r, bool timing) {
  nlohmann::json claims = nlohmann::json::array();
  for (const auto& c : r.claims) {
    nlohmann::json item{{"id", c.id}, {"pass", c.pass}, {"checks", c.checks}};
    if (c.witness) item["witness"] = *c.witness;
    claims.push_back(item);
  }
  nlohmann::json doc{{"n", r.vertex_count},
                     {"m", r.edge_count},
                     {"demand", r.demand},
                     {"mode", r.options.mode == VerifyMode::Exhaustive ? "exhaustive" : "sampled"},
                     {"claims", claims},
                     {"pass", r.all_pass()}};
  if (r.options.mode == VerifyMode::Sampled) {
    doc["seed"] = r.options.seed;
    doc["trials"] = r.options.trials;
  }
  if (r.subgraph_count) doc["S_f"] = *r.subgraph_count;
  if (r.orientation_count) doc["O_f"] = *r.orientation_count;
  if (timing) doc["seconds"] = r.seconds;
  return doc;
}

inline int cmd_verify(const Inputs& in, const VerifyOptions& opt, bool timing, std::ostream& out) {
  const WeightedGraph g = parse_graph(read_file(in.graph_file));
  const Demand d = load_demand(in, g);
  const VerificationReport r = verify_bijection(g, d, opt);
  if (in.json) {
    out << report_json(r, timing).dump() << '\n';
  } else {
    out << format_report(r, timing);
  }
  return r.all_pass() ? kOk : kVerifyFailed;
}

inline int cmd_paths(const Inputs& in, bool vertex_disjoint, std::ostream& out) {
  const WeightedGraph g = parse_graph(read_file(in.graph_file));
  if (in.st.empty()) throw DemandError("paths requires --st <s> <t> <k>");
  const DirectedSubgraph d = load_arc_set(in, g);
  const auto paths = vertex_disjoint ? vertex_disjoint_paths(g, d, in.st[0], in.st[1], in.st[2])
                                     : k_disjoint_paths(g, d, in.st[0], in.st[1], in.st[2]);
  if (!paths) return report_infeasible(in, out);
  if (in.json) {
    out << nlohmann::json{{"paths", paths->paths}, {"total", paths->total_weight}}.dump() << '\n';
  } else {
    for (const auto& p : paths->paths) out << format_path(p) << '\n';
    out << "total " << paths->total_weight << '\n';
  }
  return kOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flow-preserving bijection between subgraphs and orientations"};
  app.require_subcommand(1);

  Inputs in;
  bool trace = false;
  bool timing = false;
  bool sampled = false;
  bool vertex_disjoint = false;
  std::size_t cap = 20;
  VerifyOptions vopt;

  auto add_common = [&](CLI::App* sub, bool demand_required) {
    sub->add_option("graph", in.graph_file, "graph file")->required();
    auto* demand = sub->add_option("--demand", in.demand_file, "demand file");
    auto* st = sub->add_option("--st", in.st, "s t k")->expected(3);
    demand->excludes(st);
    st->excludes(demand);
    if (demand_required) {
      sub->callback([&in] {
        if (in.st.empty() && in.demand_file.empty()) {
          throw CLI::ValidationError("--demand or --st", "a demand is required");
        }
      });
    }
    sub->add_flag("--json", in.json, "machine-readable output");
  };

  auto* solve = app.add_subcommand("solve", "min-cost d-flow on a subgraph or orientation");
  add_common(solve, true);
  auto* s_sub = solve->add_option("--subgraph", in.subgraph, "restrict to a subgraph mask");
  solve->add_option("--orientation", in.orientation, "restrict to an orientation mask")
      ->excludes(s_sub);

  auto* orient = app.add_subcommand("orient", "map a subgraph to its orientation");
  add_common(orient, true);
  orient->add_option("--subgraph", in.subgraph, "subgraph mask")->required();
  orient->add_flag("--trace", trace, "print the rule fired at every step");

  auto* underlying = app.add_subcommand("underlying", "map an orientation to its subgraph");
  add_common(underlying, true);
  underlying->add_option("--orientation", in.orientation, "orientation mask")->required();
  underlying->add_flag("--trace", trace, "print the rule fired at every step");

  auto* count = app.add_subcommand("count", "count feasible subgraphs and orientations");
  add_common(count, true);
  count->add_option("--cap", cap, "maximum edge count")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "check the bijection and its lemmas");
  add_common(verify, true);
  verify->add_flag("--sampled", sampled, "random sampling instead of exhaustive search");
  verify->add_option("--seed", vopt.seed, "sampling seed")->capture_default_str();
  verify->add_option("--trials", vopt.trials, "sampling trials")->capture_default_str();
  verify->add_option("--cap", vopt.max_edges, "exhaustive edge cap")->capture_default_str();
  verify->add_flag("--timing", timing, "report wall time");

  auto* paths = app.add_subcommand("paths", "minimal k disjoint (s,t)-paths");
  add_common(paths, false);
  auto* p_sub = paths->add_option("--subgraph", in.subgraph, "restrict to a subgraph mask");
  paths->add_option("--orientation", in.orientation, "restrict to an orientation mask")
      ->excludes(p_sub);
  paths->add_flag("--vertex-disjoint", vertex_disjoint, "internally vertex-disjoint paths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*solve) return cmd_solve(in, out);
    if (*orient) return cmd_map(in, true, trace, out);
    if (*underlying) return cmd_map(in, false, trace, out);
    if (*count) return cmd_count(in, cap, out);
    if (*verify) {
      vopt.mode = sampled ? VerifyMode::Sampled : VerifyMode::Exhaustive;
      return cmd_verify(in, vopt, timing, out);
    }
    if (*paths) return cmd_paths(in, vertex_disjoint, out);
  } catch (const InfeasibleInput&) {
    return report_infeasible(in, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"orientflow"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace orientflow::cli
