#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace orientflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParseErrorKind {
  Malformed,
  MissingHeader,
  EdgeCountMismatch,
  SelfLoop,
  DuplicateEdge,
  NonPositiveWeight,
  VertexOutOfRange,
  DemandNotBalanced,
};

inline const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::Malformed: return "malformed line";
    case ParseErrorKind::MissingHeader: return "missing header";
    case ParseErrorKind::EdgeCountMismatch: return "edge count mismatch";
    case ParseErrorKind::SelfLoop: return "self-loop";
    case ParseErrorKind::DuplicateEdge: return "duplicate edge";
    case ParseErrorKind::NonPositiveWeight: return "non-positive weight";
    case ParseErrorKind::VertexOutOfRange: return "vertex out of range";
    case ParseErrorKind::DemandNotBalanced: return "demand does not sum to zero";
  }
  return "parse error";
}

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail = {})
      : Error("line " + std::to_string(line) + ": " + to_string(kind) +
              (detail.empty() ? std::string{} : ": " + detail)),
        kind_(kind),
        line_(line) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  /// 1-based line number; 0 when the error is not tied to a single line.
  std::size_t line() const noexcept { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

/// Invalid graph handed to the WeightedGraph constructor.
class GraphError : public Error {
 public:
  GraphError(ParseErrorKind kind, const std::string& detail)
      : Error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ParseErrorKind kind() const noexcept { return kind_; }

 private:
  ParseErrorKind kind_;
};

/// Wrong-length mask, stray character, or a Mixed set handed to a mask encoder.
class MaskError : public Error {
 public:
  using Error::Error;
};

/// An arc that is not part of the owning graph.
class ArcError : public Error {
 public:
  using Error::Error;
};

/// Bad demand or terminal arguments (s = t, out-of-range vertex, unbalanced).
class DemandError : public Error {
 public:
  using Error::Error;
};

/// A map or step was handed an arc set on which no d-flow exists.
class InfeasibleInput : public Error {
 public:
  using Error::Error;
};

class NotASubgraph : public Error {
 public:
  using Error::Error;
};

class NotAnOrientation : public Error {
 public:
  using Error::Error;
};

/// Both exclusive rules of a bijection step fired. Signals a broken solver or
/// a genuine counterexample; never expected.
class RuleConflict : public Error {
 public:
  using Error::Error;
};

/// The flow handed to path decomposition contains a cycle.
class CyclicSupport : public Error {
 public:
  using Error::Error;
};

/// Exhaustive routine asked to run beyond its configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace orientflow
