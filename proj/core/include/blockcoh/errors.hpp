#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace blockcoh {

enum class ErrorKind {
  NotSquare,
  NonHermitian,
  NotPositive,
  TraceDeviation,
  ConvergenceFailure,
  NotUnitary,
  NotIdempotent,
  NotOrthogonal,
  Incomplete,
  RankDeviation,
  EmptyBlock,
  SizeMismatch,
  DimensionMismatch,
  InvalidPartition,
  NothingToRefine,
  DegenerateNormalization,
  InvalidProbability,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for every validation and numerical failure in the
/// library. `measured`/`tolerance` carry the violated bound when one exists;
/// `first`/`second` carry the offending operator indices.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message,
        std::optional<double> measured = std::nullopt,
        std::optional<double> tolerance = std::nullopt,
        std::optional<std::size_t> first = std::nullopt,
        std::optional<std::size_t> second = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> measured() const noexcept { return measured_; }
  std::optional<double> tolerance() const noexcept { return tolerance_; }
  std::optional<std::size_t> first_index() const noexcept { return first_; }
  std::optional<std::size_t> second_index() const noexcept { return second_; }

 private:
  ErrorKind kind_;
  std::optional<double> measured_;
  std::optional<double> tolerance_;
  std::optional<std::size_t> first_;
  std::optional<std::size_t> second_;
};

}  // namespace blockcoh
