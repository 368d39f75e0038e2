#ifndef RRD_ERRORS_HPP
#define RRD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rrd {

// Base class for all library errors so callers can catch one type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NegativeMass : Error {
  using Error::Error;
};

struct NotNormalized : Error {
  using Error::Error;
};

struct NonPositiveInit : Error {
  using Error::Error;
};

struct InfeasibleBudget : Error {
  using Error::Error;
};

struct ScaleNonPositive : Error {
  using Error::Error;
};

struct LambdaNonPositive : Error {
  using Error::Error;
};

struct AlphabetTooLarge : Error {
  using Error::Error;
};

struct RateTooLargeForMemory : Error {
  using Error::Error;
};

// Parse failures carry the 1-based line number of the offending input.
struct ParseError : Error {
  int line;
  ParseError(int line_, const std::string& what_)
      : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

}  // namespace rrd

#endif  // RRD_ERRORS_HPP
