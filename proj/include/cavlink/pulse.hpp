#pragma once

// Counterintuitive STIRAP pulse pair: the receiver (Stokes) Gaussian peaks
// before the sender (pump) Gaussian.  Centers and width are fractions of the
// transfer window T; amplitudes are angular Rabi frequencies.

#include <cmath>
#include <string>

#include "cavlink/errors.hpp"

namespace cavlink {

enum class PulseRole { sender, receiver };

struct PulseShape {
  double pump_center_fraction = 0.6;   // sender peak, late
  double stokes_center_fraction = 0.4; // receiver peak, early
  double width_fraction = 0.15;        // gaussian sigma / T

  void validate() const {
    if (!(width_fraction > 0.0))
      throw config_error("pulse shape: width_fraction must be positive");
    if (!(stokes_center_fraction > 0.0 && stokes_center_fraction < 1.0) ||
        !(pump_center_fraction > 0.0 && pump_center_fraction < 1.0))
      throw config_error("pulse shape: center fractions must lie in (0, 1)");
    if (!(stokes_center_fraction < pump_center_fraction))
      throw config_error(
          "pulse shape: stokes (receiver) center must precede pump (sender) "
          "center for counterintuitive ordering");
  }
};

struct PulseProfile {
  double omega0 = 0.0;   // peak Rabi frequency, rad/s
  double duration = 0.0; // window T, s
  PulseShape shape{};

  void validate() const {
    if (!(omega0 >= 0.0) || !std::isfinite(omega0))
      throw config_error("pulse: omega0 must be finite and >= 0");
    if (!(duration > 0.0) || !std::isfinite(duration))
      throw config_error("pulse: duration must be finite and positive");
    shape.validate();
  }
};

// Instantaneous Rabi frequency of one leg at time t in [0, T].
inline double pulse_value(const PulseProfile& p, PulseRole role, double t) {
  if (t < 0.0 || t > p.duration)
    throw config_error("pulse_value: t outside the transfer window [0, T]");
  const double frac = role == PulseRole::sender ? p.shape.pump_center_fraction
                                                : p.shape.stokes_center_fraction;
  const double tc = frac * p.duration;
  const double sigma = p.shape.width_fraction * p.duration;
  const double u = (t - tc) / sigma;
  return p.omega0 * std::exp(-0.5 * u * u);
}

} // namespace cavlink
