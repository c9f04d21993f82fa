#pragma once
#include <stdexcept>
#include <string>

namespace spinsim {

// Error taxonomy; the CLI maps these onto process exit codes:
// parse/config -> 2, numerical -> 3, I/O -> 4.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spinsim
