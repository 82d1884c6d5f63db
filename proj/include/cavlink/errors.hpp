#pragma once

// Error taxonomy. The CLI maps these onto exit codes:
//   config_error -> 2, numeric_error -> 3, io_error -> 4.

#include <stdexcept>
#include <string>

namespace cavlink {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid parameters / configuration (bad units, negative rates, domain violations).
struct config_error : error {
  using error::error;
};

// Numerical failure (step underflow, non-finite state, eigensolver failure).
struct numeric_error : error {
  using error::error;
};

// Optimizer found no interior maximum; carries the better bracket endpoint.
struct boundary_error : numeric_error {
  boundary_error(const std::string& msg, double omega0, double p)
      : numeric_error(msg), omega0(omega0), p(p) {}
  double omega0;
  double p;
};

struct io_error : error {
  using error::error;
};

} // namespace cavlink
