#pragma once

#include <stdexcept>
#include <string>

namespace specforge {

// Malformed input data, schema violations and resource guards. The CLI maps
// these to exit code 2. Precondition violations on arguments use
// std::invalid_argument instead (exit code 1).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the grid generator when beta^k exceeds the configured cap.
class CellCapExceeded : public DataError {
 public:
  CellCapExceeded(const std::string& what, double cells)
      : DataError(what), cells_(cells) {}
  double cells() const { return cells_; }

 private:
  double cells_;
};

}  // namespace specforge
