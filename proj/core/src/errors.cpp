#include "blockcoh/errors.hpp"

#include <sstream>
#include <utility>

namespace blockcoh {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::TraceDeviation: return "TraceDeviation";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotIdempotent: return "NotIdempotent";
    case ErrorKind::NotOrthogonal: return "NotOrthogonal";
    case ErrorKind::Incomplete: return "Incomplete";
    case ErrorKind::RankDeviation: return "RankDeviation";
    case ErrorKind::EmptyBlock: return "EmptyBlock";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidPartition: return "InvalidPartition";
    case ErrorKind::NothingToRefine: return "NothingToRefine";
    case ErrorKind::DegenerateNormalization: return "DegenerateNormalization";
    case ErrorKind::InvalidProbability: return "InvalidProbability";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorKind kind, const std::string& message,
                           std::optional<double> measured,
                           std::optional<double> tolerance) {
  std::ostringstream out;
  out << to_string(kind) << ": " << message;
  if (measured) {
    out << " (measured " << *measured;
    if (tolerance) out << ", tolerance " << *tolerance;
    out << ")";
  }
  return out.str();
}

}  // namespace

Error::Error(ErrorKind kind, std::string message, std::optional<double> measured,
             std::optional<double> tolerance, std::optional<std::size_t> first,
             std::optional<std::size_t> second)
    : std::runtime_error(format_message(kind, message, measured, tolerance)),
      kind_(kind),
      measured_(measured),
      tolerance_(tolerance),
      first_(first),
      second_(second) {}

}  // namespace blockcoh
