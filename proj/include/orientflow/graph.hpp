#pragma once

// Symmetric digraph view of a simple weighted graph.
//
// Every undirected edge e_i (0-based slot i, in input order) owns two arcs:
// the reference arc as written in the input (ArcId 2i) and its reverse
// (ArcId 2i+1). Arc sets are bitsets over these 2m ids.

#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "orientflow/errors.hpp"

namespace orientflow {

/// 1-based vertex index.
using Vertex = int;

struct Arc {
  Vertex tail = 0;
  Vertex head = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

constexpr Arc rev(Arc a) noexcept { return Arc{a.head, a.tail}; }

/// Canonical arc index: 2*slot for the reference arc, 2*slot+1 for its reverse.
struct ArcId {
  std::size_t value = 0;

  constexpr std::size_t edge() const noexcept { return value / 2; }
  constexpr bool is_reference() const noexcept { return value % 2 == 0; }
  constexpr ArcId reversed() const noexcept { return ArcId{value ^ 1U}; }

  friend bool operator==(const ArcId&, const ArcId&) = default;
  friend auto operator<=>(const ArcId&, const ArcId&) = default;
};

constexpr ArcId reference_arc(std::size_t edge) noexcept { return ArcId{2 * edge}; }
constexpr ArcId reverse_arc(std::size_t edge) noexcept { return ArcId{2 * edge + 1}; }
/// chi on ids: the reference representative of the arc's slot.
constexpr ArcId chi(ArcId a) noexcept { return ArcId{a.value & ~std::size_t{1}}; }

/// Undirected edge with its reference direction u -> v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  std::int64_t weight = 1;
};

class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(int vertex_count, std::vector<Edge> edges)
      : n_(vertex_count), edges_(std::move(edges)) {
    if (n_ < 1) {
      throw GraphError(ParseErrorKind::Malformed, "vertex count must be positive");
    }
    std::set<std::pair<Vertex, Vertex>> seen;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      const std::string where = "edge " + std::to_string(i + 1);
      if (e.u < 1 || e.u > n_ || e.v < 1 || e.v > n_) {
        throw GraphError(ParseErrorKind::VertexOutOfRange, where);
      }
      if (e.u == e.v) throw GraphError(ParseErrorKind::SelfLoop, where);
      if (e.weight < 1) throw GraphError(ParseErrorKind::NonPositiveWeight, where);
      if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
        throw GraphError(ParseErrorKind::DuplicateEdge, where);
      }
      arc_index_.emplace(key(e.u, e.v), reference_arc(i));
      arc_index_.emplace(key(e.v, e.u), reverse_arc(i));
    }
  }

  int vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t arc_count() const noexcept { return 2 * edges_.size(); }

  const Edge& edge(std::size_t i) const { return edges_.at(i); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::int64_t weight(std::size_t edge) const { return edges_.at(edge).weight; }
  std::int64_t weight(ArcId a) const { return weight(a.edge()); }

  Arc arc(ArcId a) const {
    const Edge& e = edges_.at(a.edge());
    return a.is_reference() ? Arc{e.u, e.v} : Arc{e.v, e.u};
  }

  std::optional<ArcId> find_arc(Arc a) const {
    if (a.tail < 1 || a.tail > n_ || a.head < 1 || a.head > n_) return std::nullopt;
    auto it = arc_index_.find(key(a.tail, a.head));
    if (it == arc_index_.end()) return std::nullopt;
    return it->second;
  }

  ArcId arc_id(Arc a) const {
    if (auto id = find_arc(a)) return *id;
    throw ArcError("arc " + std::to_string(a.tail) + ">" + std::to_string(a.head) +
                   " is not in the graph");
  }

  /// The reference arc of a's slot; chi(a) == chi(rev(a)).
  Arc chi(Arc a) const { return arc(orientflow::chi(arc_id(a))); }

 private:
  std::uint64_t key(Vertex tail, Vertex head) const noexcept {
    return static_cast<std::uint64_t>(tail) * static_cast<std::uint64_t>(n_ + 1) +
           static_cast<std::uint64_t>(head);
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, ArcId> arc_index_;
};

/// Arbitrary subset of the 2m arcs of a graph with m edges. Intermediate
/// states of the bijection are neither subgraphs nor orientations, so any
/// subset is allowed.
class DirectedSubgraph {
 public:
  DirectedSubgraph() = default;
  explicit DirectedSubgraph(std::size_t edge_count) : bits_(2 * edge_count) {}

  static DirectedSubgraph empty(std::size_t edge_count) {
    return DirectedSubgraph(edge_count);
  }
  static DirectedSubgraph full(std::size_t edge_count) {
    DirectedSubgraph d(edge_count);
    d.bits_.set();
    return d;
  }
  static DirectedSubgraph from_arcs(std::size_t edge_count, const std::vector<ArcId>& arcs) {
    DirectedSubgraph d(edge_count);
    for (ArcId a : arcs) d.insert(a);
    return d;
  }

  std::size_t edge_count() const noexcept { return bits_.size() / 2; }
  std::size_t arc_capacity() const noexcept { return bits_.size(); }
  std::size_t size() const noexcept { return bits_.count(); }
  bool empty() const noexcept { return bits_.none(); }

  bool contains(ArcId a) const { return a.value < bits_.size() && bits_.test(a.value); }
  void insert(ArcId a) { bits_.set(checked(a)); }
  void erase(ArcId a) { bits_.reset(checked(a)); }

  /// Number of arcs (0, 1 or 2) present at an edge slot.
  int slot_arity(std::size_t edge) const {
    return static_cast<int>(contains(reference_arc(edge))) +
           static_cast<int>(contains(reverse_arc(edge)));
  }

  std::vector<ArcId> arcs() const {
    std::vector<ArcId> out;
    out.reserve(size());
    for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos;
         i = bits_.find_next(i)) {
      out.push_back(ArcId{i});
    }
    return out;
  }

  /// One character per arc in id order ('1' = present).
  std::string arc_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_.test(i)) s[i] = '1';
    }
    return s;
  }

  friend bool operator==(const DirectedSubgraph& a, const DirectedSubgraph& b) {
    return a.bits_ == b.bits_;
  }
  friend bool operator<(const DirectedSubgraph& a, const DirectedSubgraph& b) {
    return a.bits_ < b.bits_;
  }

 private:
  std::size_t checked(ArcId a) const {
    if (a.value >= bits_.size()) {
      throw ArcError("arc id " + std::to_string(a.value) + " out of range");
    }
    return a.value;
  }

  boost::dynamic_bitset<> bits_;
};

// Arc algebra. All return a new set and leave every other slot untouched.

/// D (+) a: insert a, drop rev(a).
inline DirectedSubgraph orient_insert(DirectedSubgraph d, ArcId a) {
  d.insert(a);
  d.erase(a.reversed());
  return d;
}

/// D + a: both arcs of a's slot.
inline DirectedSubgraph pair_insert(DirectedSubgraph d, ArcId a) {
  d.insert(a);
  d.insert(a.reversed());
  return d;
}

/// D - a: neither arc of a's slot.
inline DirectedSubgraph pair_remove(DirectedSubgraph d, ArcId a) {
  d.erase(a);
  d.erase(a.reversed());
  return d;
}

inline DirectedSubgraph orient_insert(const WeightedGraph& g, DirectedSubgraph d, Arc a) {
  return orient_insert(std::move(d), g.arc_id(a));
}
inline DirectedSubgraph pair_insert(const WeightedGraph& g, DirectedSubgraph d, Arc a) {
  return pair_insert(std::move(d), g.arc_id(a));
}
inline DirectedSubgraph pair_remove(const WeightedGraph& g, DirectedSubgraph d, Arc a) {
  return pair_remove(std::move(d), g.arc_id(a));
}

enum class ArcSetKind { Subgraph, Orientation, Mixed };

inline const char* to_string(ArcSetKind kind) {
  switch (kind) {
    case ArcSetKind::Subgraph: return "subgraph";
    case ArcSetKind::Orientation: return "orientation";
    case ArcSetKind::Mixed: return "mixed";
  }
  return "?";
}

/// Subgraph iff every slot holds 0 or 2 arcs, Orientation iff every slot holds
/// exactly 1. With no edges at all the empty set counts as a Subgraph.
inline ArcSetKind classify(const DirectedSubgraph& d) {
  bool all_paired = true;
  bool all_single = true;
  for (std::size_t i = 0; i < d.edge_count(); ++i) {
    if (d.slot_arity(i) == 1) {
      all_paired = false;
    } else {
      all_single = false;
    }
  }
  if (all_paired) return ArcSetKind::Subgraph;
  if (all_single) return ArcSetKind::Orientation;
  return ArcSetKind::Mixed;
}

// Masks: character i describes edge slot i.
//   subgraph mask:    '1' = both arcs present, '0' = neither
//   orientation mask: '1' = reference arc, '0' = reverse arc

namespace detail {
inline void check_mask(std::string_view mask, std::size_t edge_count) {
  if (mask.size() != edge_count) {
    throw MaskError("mask has length " + std::to_string(mask.size()) + ", expected " +
                    std::to_string(edge_count));
  }
  for (char c : mask) {
    if (c != '0' && c != '1') throw MaskError("mask must contain only '0' and '1'");
  }
}
}  // namespace detail

inline std::string encode_subgraph(const DirectedSubgraph& d) {
  if (classify(d) != ArcSetKind::Subgraph) throw MaskError("arc set is not a subgraph");
  std::string s(d.edge_count(), '0');
  for (std::size_t i = 0; i < d.edge_count(); ++i) {
    if (d.slot_arity(i) == 2) s[i] = '1';
  }
  return s;
}

inline std::string encode_orientation(const DirectedSubgraph& d) {
  if (d.edge_count() != 0 && classify(d) != ArcSetKind::Orientation) {
    throw MaskError("arc set is not an orientation");
  }
  std::string s(d.edge_count(), '0');
  for (std::size_t i = 0; i < d.edge_count(); ++i) {
    if (d.contains(reference_arc(i))) s[i] = '1';
  }
  return s;
}

inline DirectedSubgraph decode_subgraph(std::string_view mask, std::size_t edge_count) {
  detail::check_mask(mask, edge_count);
  DirectedSubgraph d(edge_count);
  for (std::size_t i = 0; i < edge_count; ++i) {
    if (mask[i] == '1') {
      d.insert(reference_arc(i));
      d.insert(reverse_arc(i));
    }
  }
  return d;
}

inline DirectedSubgraph decode_orientation(std::string_view mask, std::size_t edge_count) {
  detail::check_mask(mask, edge_count);
  DirectedSubgraph d(edge_count);
  for (std::size_t i = 0; i < edge_count; ++i) {
    d.insert(mask[i] == '1' ? reference_arc(i) : reverse_arc(i));
  }
  return d;
}

inline std::string format_arc(Arc a) {
  return std::to_string(a.tail) + ">" + std::to_string(a.head);
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view token) {
  Int value{};
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

/// Calls fn(line_number, tokens) for every non-blank, non-comment line.
template <typename Fn>
void for_each_record(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto tokens = split_ws(text.substr(pos, end - pos));
    if (!tokens.empty() && tokens.front().front() != '#') fn(line_no, tokens);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

}  // namespace detail

/// Parses the line-oriented graph format:
///
///     # comment
///     p <n> <m>
///     e <u> <v> <w>     (m lines; order fixes e_1..e_m, u->v is the reference arc)
inline WeightedGraph parse_graph(std::string_view text) {
  std::optional<std::pair<int, std::size_t>> header;
  std::vector<Edge> edges;
  std::set<std::pair<Vertex, Vertex>> seen;
  std::size_t last_line = 0;

  detail::for_each_record(text, [&](std::size_t line, const auto& tok) {
    last_line = line;
    if (tok[0] == "p") {
      if (header || tok.size() != 3) throw ParseError(ParseErrorKind::Malformed, line);
      auto n = detail::parse_int<int>(tok[1]);
      auto m = detail::parse_int<std::size_t>(tok[2]);
      if (!n || !m || *n < 1) throw ParseError(ParseErrorKind::Malformed, line);
      header.emplace(*n, *m);
      return;
    }
    if (tok[0] != "e") throw ParseError(ParseErrorKind::Malformed, line);
    if (!header) throw ParseError(ParseErrorKind::MissingHeader, line);
    if (tok.size() != 4) throw ParseError(ParseErrorKind::Malformed, line);
    auto u = detail::parse_int<int>(tok[1]);
    auto v = detail::parse_int<int>(tok[2]);
    auto w = detail::parse_int<std::int64_t>(tok[3]);
    if (!u || !v || !w) throw ParseError(ParseErrorKind::Malformed, line);
    const int n = header->first;
    if (*u < 1 || *u > n || *v < 1 || *v > n) {
      throw ParseError(ParseErrorKind::VertexOutOfRange, line);
    }
    if (*u == *v) throw ParseError(ParseErrorKind::SelfLoop, line);
    if (*w < 1) throw ParseError(ParseErrorKind::NonPositiveWeight, line);
    if (!seen.emplace(std::min(*u, *v), std::max(*u, *v)).second) {
      throw ParseError(ParseErrorKind::DuplicateEdge, line);
    }
    if (edges.size() == header->second) {
      throw ParseError(ParseErrorKind::EdgeCountMismatch, line,
                       "more than " + std::to_string(header->second) + " edges");
    }
    edges.push_back(Edge{*u, *v, *w});
  });

  if (!header) throw ParseError(ParseErrorKind::MissingHeader, last_line);
  if (edges.size() != header->second) {
    throw ParseError(ParseErrorKind::EdgeCountMismatch, last_line,
                     "expected " + std::to_string(header->second) + " edges, found " +
                         std::to_string(edges.size()));
  }
  return WeightedGraph(header->first, std::move(edges));
}

inline std::string format_graph(const WeightedGraph& g) {
  std::ostringstream os;
  os << "p " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) os << "e " << e.u << ' ' << e.v << ' ' << e.weight << '\n';
  return os.str();
}

}  // namespace orientflow
