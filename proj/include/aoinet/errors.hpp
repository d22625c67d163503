#ifndef AOINET_ERRORS_HPP
#define AOINET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace aoinet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Validation
struct DimensionMismatch : Error {
  using Error::Error;
};

struct OutOfRangeEntry : Error {
  OutOfRangeEntry(int row_, int col_, double value_, const std::string& what_)
      : Error(what_), row(row_), col(col_), value(value_) {}
  int row;
  int col;  // -1 for vector entries
  double value;
};

struct InvalidRange : Error {
  using Error::Error;
};

// Analytic / gradient
struct DegenerateChain : Error {
  using Error::Error;
};
struct DegenerateEnergy : Error {
  using Error::Error;
};
struct DegenerateReset : Error {
  using Error::Error;
};
struct PolicyAtBoundary : Error {
  using Error::Error;
};
struct StepOutOfRange : Error {
  using Error::Error;
};

// Optimization
struct EmptyInterval : Error {
  using Error::Error;
};
struct NonFiniteGradient : Error {
  using Error::Error;
};
struct AllStartsFailed : Error {
  using Error::Error;
};

// Configuration / CLI
struct ConfigError : Error {
  explicit ConfigError(const std::string& what_, int line_ = 0)
      : Error(what_), line(line_) {}
  int line;  // 1-based; 0 when not tied to a line
};

}  // namespace aoinet

#endif  // AOINET_ERRORS_HPP
