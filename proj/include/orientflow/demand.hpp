#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "orientflow/errors.hpp"
#include "orientflow/graph.hpp"

namespace orientflow {

/// Integer demand d: V -> Z with sum zero. d(u) is the net out-flow required
/// at u, so a source has positive demand.
class Demand {
 public:
  Demand() = default;

  explicit Demand(std::vector<std::int64_t> values) : values_(std::move(values)) {
    if (std::accumulate(values_.begin(), values_.end(), std::int64_t{0}) != 0) {
      throw DemandError("demand values must sum to zero");
    }
  }

  static Demand zero(int vertex_count) {
    return Demand(std::vector<std::int64_t>(static_cast<std::size_t>(vertex_count), 0));
  }

  int vertex_count() const noexcept { return static_cast<int>(values_.size()); }
  std::int64_t operator[](Vertex v) const { return values_.at(static_cast<std::size_t>(v - 1)); }
  const std::vector<std::int64_t>& values() const noexcept { return values_; }

  bool is_zero() const {
    for (auto x : values_) {
      if (x != 0) return false;
    }
    return true;
  }

  /// Total flow that has to leave the sources.
  std::int64_t total_supply() const {
    std::int64_t s = 0;
    for (auto x : values_) {
      if (x > 0) s += x;
    }
    return s;
  }

  friend bool operator==(const Demand&, const Demand&) = default;

 private:
  std::vector<std::int64_t> values_;
};

/// Parses `d <u> <value>` lines; unlisted vertices default to 0.
inline Demand parse_demand(std::string_view text, int vertex_count) {
  std::vector<std::int64_t> values(static_cast<std::size_t>(vertex_count), 0);
  std::vector<bool> listed(values.size(), false);
  std::size_t last_line = 0;
  detail::for_each_record(text, [&](std::size_t line, const auto& tok) {
    last_line = line;
    if (tok.size() != 3 || tok[0] != "d") throw ParseError(ParseErrorKind::Malformed, line);
    auto u = detail::parse_int<int>(tok[1]);
    auto value = detail::parse_int<std::int64_t>(tok[2]);
    if (!u || !value) throw ParseError(ParseErrorKind::Malformed, line);
    if (*u < 1 || *u > vertex_count) throw ParseError(ParseErrorKind::VertexOutOfRange, line);
    const auto idx = static_cast<std::size_t>(*u - 1);
    if (listed[idx]) throw ParseError(ParseErrorKind::Malformed, line, "vertex listed twice");
    listed[idx] = true;
    values[idx] = *value;
  });
  if (std::accumulate(values.begin(), values.end(), std::int64_t{0}) != 0) {
    throw ParseError(ParseErrorKind::DemandNotBalanced, last_line);
  }
  return Demand(std::move(values));
}

inline std::string format_demand(const Demand& d) {
  std::string out;
  for (Vertex v = 1; v <= d.vertex_count(); ++v) {
    if (d[v] != 0) out += "d " + std::to_string(v) + " " + std::to_string(d[v]) + "\n";
  }
  return out;
}

}  // namespace orientflow
