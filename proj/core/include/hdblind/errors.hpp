#pragma once

#include <stdexcept>
#include <string>

namespace hdblind {

// Process exit-code contract: 0 success, 1 invalid configuration,
// 2 I/O failure, 3 internal numerical-domain error.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum exit_code : int {
  exit_ok = 0,
  exit_config = 1,
  exit_io = 2,
  exit_numerical = 3,
};

}  // namespace hdblind
