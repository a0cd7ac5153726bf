#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace glwt {

enum class ErrorKind {
  // graph_core
  IndexOutOfRange,
  SelfLoop,
  NonPositiveWeight,
  DuplicateEdge,
  IsolatedNodeForNormalized,
  NotSymmetric,
  DecompositionFailure,
  DimensionMismatch,
  // spectral
  UnsupportedFamily,
  InvalidOrder,
  InvalidArgument,
  // glwt / training
  NegativeThreshold,
  EmptyDataset,
  DivergedLoss,
  // symbolic
  NonPositiveEpsilon,
  SyntaxError,
  UnknownScale,
  UnboundVariable,
  DuplicateRule,
  ScaleOutOfRange,
  DegenerateLabels,
  EmptyGrid,
  // data_io
  ConnectivityFailure,
  IoFailure,
  VersionMismatch,
  SchemaError,
  RowCountMismatch,
  UnknownLabel,
  QuotaExceeded,
  // cli
  UsageError,
  CheckFailed,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` lets callers branch
/// without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Syntax errors carry a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, int line, int column, const std::string& message);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace glwt
