#pragma once

// Time-dependent atom-cavity coupling g(t).  Motion along the cavity axis
// displaces the ion across the standing wave, so g follows the mode function:
//   g(t) = g0 * cos(2*pi * x(t) / lambda),   x(t) = sum_p a_p cos(w_p t + phi_p).
// "constant" is the x(t) = 0 special case; "sinusoid" is a single tone.
// |g(t)| <= g0 by construction (the standing wave only reduces the magnitude;
// the sign flips past a node).

#include <cmath>
#include <utility>
#include <vector>

#include "cavlink/constants.hpp"
#include "cavlink/errors.hpp"

namespace cavlink {

struct MotionTone {
  double amplitude = 0.0; // m
  double omega = 0.0;     // rad/s
  double phase = 0.0;     // rad
};

class CouplingTrajectory {
 public:
  enum class Kind { constant, sinusoid, mode_sum };

  CouplingTrajectory() = default;

  static CouplingTrajectory constant(double g0) {
    CouplingTrajectory t;
    t.kind_ = Kind::constant;
    t.g0_ = g0;
    return t;
  }

  static CouplingTrajectory sinusoid(double g0, double wavelength,
                                     MotionTone tone) {
    CouplingTrajectory t;
    t.kind_ = Kind::sinusoid;
    t.g0_ = g0;
    t.wavelength_ = wavelength;
    t.tones_ = {tone};
    t.check();
    return t;
  }

  static CouplingTrajectory mode_sum(double g0, double wavelength,
                                     std::vector<MotionTone> tones) {
    CouplingTrajectory t;
    t.kind_ = Kind::mode_sum;
    t.g0_ = g0;
    t.wavelength_ = wavelength;
    t.tones_ = std::move(tones);
    t.check();
    return t;
  }

  Kind kind() const { return kind_; }
  double g0() const { return g0_; }
  double wavelength() const { return wavelength_; }
  const std::vector<MotionTone>& tones() const { return tones_; }

  // Axial displacement at time t.
  double displacement(double t) const {
    double x = 0.0;
    for (const auto& tone : tones_)
      x += tone.amplitude * std::cos(tone.omega * t + tone.phase);
    return x;
  }

  // Instantaneous coupling, rad/s.
  double operator()(double t) const {
    if (kind_ == Kind::constant) return g0_;
    return g0_ * std::cos(two_pi * displacement(t) / wavelength_);
  }

 private:
  void check() const {
    if (!(g0_ >= 0.0)) throw config_error("trajectory: g0 must be >= 0");
    if (kind_ != Kind::constant && !(wavelength_ > 0.0))
      throw config_error("trajectory: wavelength must be positive");
  }

  Kind kind_ = Kind::constant;
  double g0_ = 0.0;
  double wavelength_ = 0.0;
  std::vector<MotionTone> tones_{};
};

} // namespace cavlink
