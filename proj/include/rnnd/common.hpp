#pragma once

#include <cstdint>
#include <stdexcept>

#include <omp.h>

namespace rnnd {

// Default seed for every command and builder. Fixed (not time-based) so
// default runs are reproducible.
inline constexpr uint64_t kDefaultSeed = 42;

// Malformed or inconsistent input: bad file contents, failed validation,
// I/O failure. CLI maps this to exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside an operation's documented domain. Also exit code 2.
struct ParamError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// threads <= 0 selects the hardware default.
inline int resolve_threads(int requested) {
  return requested > 0 ? requested : omp_get_max_threads();
}

}  // namespace rnnd
