#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fillrad {

enum class Errc {
  NotSquare,
  NonfiniteEntry,
  AsymmetricInput,
  NonzeroDiagonal,
  TriangleViolation,
  DuplicatePoint,
  LengthMismatch,
  NonpositiveScale,
  TooFewPoints,
  BadGrid,
  QuotientNotMetric,
  EmptyOrbit,
  DisconnectedGraph,
  SimplexBudgetExceeded,
  IndexRangeExceeded,
  NoDominantBar,
  DeathAtThreshold,
  EmptyVicinity,
  StrictlyCloserPoint,
  DimensionNotExceeded,
  NonpositiveInjectivityRadius,
  IoError,
  BadArguments,
};

const char* errc_name(Errc code);

/// Exception carrying a machine-readable error code plus key/value context
/// (witness indices, residuals, counts) that the CLI serializes verbatim.
class Error : public std::runtime_error {
 public:
  using Context = std::vector<std::pair<std::string, std::string>>;

  Error(Errc code, const std::string& message, Context context = {})
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        context_(std::move(context)) {}

  Errc code() const { return code_; }
  const Context& context() const { return context_; }

 private:
  Errc code_;
  Context context_;
};

}  // namespace fillrad
