#pragma once

// Embedded Dormand-Prince 5(4) with standard proportional step control.
// State is any fixed-size Eigen vector (real or complex); rhs(t, y, dydt).

#include <cfloat>
#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "cavlink/errors.hpp"

namespace cavlink {

struct IntegratorOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step_fraction = 1.0 / 200.0; // of the window length

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw config_error("integrator: tolerances must be positive");
    if (!(max_step_fraction > 0.0) || !(max_step_fraction <= 1.0))
      throw config_error("integrator: max_step_fraction must be in (0, 1]");
  }
};

namespace detail {

// Butcher tableau, Dormand & Prince (1980).
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double dp_b5[7] = {35.0 / 384,      0.0,        500.0 / 1113,
                                    125.0 / 192,     -2187.0 / 6784,
                                    11.0 / 84,       0.0};
inline constexpr double dp_b4[7] = {5179.0 / 57600,  0.0,        7571.0 / 16695,
                                    393.0 / 640,     -92097.0 / 339200,
                                    187.0 / 2100,    1.0 / 40};

} // namespace detail

// Integrates y' = rhs(t, y) from t0 to t1 in place.  on_accept(t, y) fires
// after every accepted step (including the final one).
template <typename Vec, typename Rhs, typename Accept>
void integrate_rk45(Rhs&& rhs, Vec& y, double t0, double t1,
                    const IntegratorOptions& opt, Accept&& on_accept) {
  opt.validate();
  const double span = t1 - t0;
  if (!(span > 0.0)) throw config_error("integrate: need t1 > t0");

  const double max_step = opt.max_step_fraction * span;
  double t = t0;
  double h = max_step;
  Vec k[7];
  Vec ytmp, ynew, yerr;

  std::uint64_t steps = 0;
  constexpr std::uint64_t max_steps = 50'000'000;

  while (t < t1) {
    if (++steps > max_steps)
      throw numeric_error("integrate: step budget exhausted");
    if (h > t1 - t) h = t1 - t;
    const double hmin = 16.0 * DBL_EPSILON * std::max(std::abs(t), span);
    if (h < hmin)
      throw numeric_error("integrate: step size underflow (stiff or singular rhs)");

    rhs(t, y, k[0]);
    for (int s = 1; s < 7; ++s) {
      ytmp = y;
      for (int j = 0; j < s; ++j)
        if (detail::dp_a[s][j] != 0.0) ytmp += (h * detail::dp_a[s][j]) * k[j];
      rhs(t + detail::dp_c[s] * h, ytmp, k[s]);
    }

    ynew = y;
    yerr = Vec::Zero();
    for (int s = 0; s < 7; ++s) {
      if (detail::dp_b5[s] != 0.0) ynew += (h * detail::dp_b5[s]) * k[s];
      const double db = detail::dp_b5[s] - detail::dp_b4[s];
      if (db != 0.0) yerr += (h * db) * k[s];
    }

    // RMS of component errors against the mixed abs/rel tolerance.
    double errsq = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double scale =
          opt.abs_tol +
          opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double e = std::abs(yerr[i]) / scale;
      errsq += e * e;
    }
    const double err = std::sqrt(errsq / static_cast<double>(y.size()));
    if (!std::isfinite(err))
      throw numeric_error("integrate: non-finite state encountered");

    if (err <= 1.0) {
      t += h;
      y = ynew;
      on_accept(t, y);
    }
    const double fac =
        err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
    h = std::min(h * fac, max_step);
  }
}

template <typename Vec, typename Rhs>
void integrate_rk45(Rhs&& rhs, Vec& y, double t0, double t1,
                    const IntegratorOptions& opt) {
  integrate_rk45(std::forward<Rhs>(rhs), y, t0, t1, opt,
                 [](double, const Vec&) {});
}

} // namespace cavlink
