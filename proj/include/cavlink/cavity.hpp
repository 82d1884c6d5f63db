#pragma once

// Single-excitation chain |r>_A |e>_A |1_cav> |e>_B |r>_B with non-Hermitian
// sinks: cavity decay kappa on the photon, spontaneous scattering Gamma on
// both excited states, common one-photon detuning Delta.

#include <complex>

#include <Eigen/Dense>

#include "cavlink/errors.hpp"
#include "cavlink/pulse.hpp"
#include "cavlink/trajectory.hpp"

namespace cavlink {

using cxd = std::complex<double>;
using State5 = Eigen::Matrix<cxd, 5, 1>;
using Ham5 = Eigen::Matrix<cxd, 5, 5>;

struct CavityAtomParams {
  double g_a = 0.0;   // nominal atom A - cavity coupling, rad/s
  double g_b = 0.0;   // nominal atom B - cavity coupling, rad/s
  double kappa = 0.0; // cavity field decay, rad/s
  double gamma = 0.0; // excited-state scattering, rad/s
  double delta = 0.0; // one-photon detuning, rad/s

  void validate() const {
    if (!(g_a >= 0.0 && g_b >= 0.0))
      throw config_error("cavity: couplings g_a, g_b must be >= 0");
    if (!(kappa >= 0.0) || !(gamma >= 0.0))
      throw config_error("cavity: decay rates kappa, gamma must be >= 0");
    if (!std::isfinite(g_a) || !std::isfinite(g_b) || !std::isfinite(kappa) ||
        !std::isfinite(gamma) || !std::isfinite(delta))
      throw config_error("cavity: parameters must be finite");
  }
};

// Effective Hamiltonian at window time t (pulses) with trajectories sampled at
// traj_t (lets a later transfer window see the same motional trajectory at
// shifted absolute time).
inline Ham5 hamiltonian_at(const CavityAtomParams& par, const PulseProfile& pulse,
                           const CouplingTrajectory& traj_a,
                           const CouplingTrajectory& traj_b, double t,
                           double traj_t) {
  const double om_a = pulse_value(pulse, PulseRole::sender, t);
  const double om_b = pulse_value(pulse, PulseRole::receiver, t);
  const double ga = traj_a(traj_t);
  const double gb = traj_b(traj_t);

  Ham5 h = Ham5::Zero();
  h(0, 1) = h(1, 0) = 0.5 * om_a;
  h(1, 2) = h(2, 1) = ga;
  h(2, 3) = h(3, 2) = gb;
  h(3, 4) = h(4, 3) = 0.5 * om_b;
  h(1, 1) = h(3, 3) = cxd(par.delta, -0.5 * par.gamma);
  h(2, 2) = cxd(0.0, -0.5 * par.kappa);
  return h;
}

inline Ham5 hamiltonian_at(const CavityAtomParams& par, const PulseProfile& pulse,
                           const CouplingTrajectory& traj_a,
                           const CouplingTrajectory& traj_b, double t) {
  return hamiltonian_at(par, pulse, traj_a, traj_b, t, t);
}

// C = g_A g_B / (kappa Gamma), the figure of merit for transfer through the bus.
inline double cooperativity(const CavityAtomParams& par) {
  par.validate();
  if (par.kappa <= 0.0 || par.gamma <= 0.0)
    throw config_error("cooperativity: kappa and gamma must be positive");
  return par.g_a * par.g_b / (par.kappa * par.gamma);
}

} // namespace cavlink
