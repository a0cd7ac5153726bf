#include "glwt/error.hpp"

namespace glwt {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::IsolatedNodeForNormalized: return "IsolatedNodeForNormalized";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::DecompositionFailure: return "DecompositionFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::InvalidOrder: return "InvalidOrder";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NegativeThreshold: return "NegativeThreshold";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::DivergedLoss: return "DivergedLoss";
    case ErrorKind::NonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownScale: return "UnknownScale";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::DuplicateRule: return "DuplicateRule";
    case ErrorKind::ScaleOutOfRange: return "ScaleOutOfRange";
    case ErrorKind::DegenerateLabels: return "DegenerateLabels";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::ConnectivityFailure: return "ConnectivityFailure";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::RowCountMismatch: return "RowCountMismatch";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::QuotaExceeded: return "QuotaExceeded";
    case ErrorKind::UsageError: return "UsageError";
    case ErrorKind::CheckFailed: return "CheckFailed";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

ParseError::ParseError(ErrorKind kind, int line, int column, const std::string& message)
    : Error(kind, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                      message),
      line_(line),
      column_(column) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace glwt
