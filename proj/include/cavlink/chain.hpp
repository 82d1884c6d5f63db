#pragma once

// Linear ion chain in a harmonic axial trap: equilibrium structure, normal
// modes (mass-weighted, James-1998 formalism made dimensionless), classical
// thermal sampling of the lowest modes, and the Monte Carlo estimate of the
// Bell infidelity caused by the communication ion riding the standing wave.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cavlink/constants.hpp"
#include "cavlink/errors.hpp"
#include "cavlink/herald.hpp"
#include "cavlink/rng.hpp"
#include "cavlink/trajectory.hpp"

namespace cavlink {

struct ChainSpec {
  std::vector<double> masses{};  // kg, one per ion
  double omega_com = 0.0;        // axial trap frequency of a reference ion, rad/s
  double temperature = 0.0;      // K
  int comm_index = 0;            // communication ion, 0-based
  double cavity_wavelength = 0.0; // m
  double g0 = 0.0;               // antinode coupling, rad/s
  double reference_mass = 0.0;   // kg; 0 selects masses[0]

  int n_ions() const { return static_cast<int>(masses.size()); }
  double ref_mass() const {
    return reference_mass > 0.0 ? reference_mass : masses.at(0);
  }

  void validate() const {
    if (masses.empty()) throw config_error("chain: need at least one ion");
    for (double m : masses)
      if (!(m > 0.0)) throw config_error("chain: masses must be positive");
    if (!(omega_com > 0.0)) throw config_error("chain: omega_com must be positive");
    if (!(temperature >= 0.0))
      throw config_error("chain: temperature must be >= 0");
    if (comm_index < 0 || comm_index >= n_ions())
      throw config_error("chain: comm_index out of range");
    if (reference_mass < 0.0)
      throw config_error("chain: reference_mass must be >= 0");
  }
};

// Dimensionless equilibrium positions from the force-balance system
//   u_m - sum_{n<m} (u_m-u_n)^-2 + sum_{n>m} (u_m-u_n)^-2 = 0,
// solved by damped Newton from a uniform-spacing guess.
inline Eigen::VectorXd equilibrium_positions(int n) {
  if (n < 1) throw config_error("equilibrium_positions: need N >= 1");
  if (n == 1) return Eigen::VectorXd::Zero(1);

  // Minimum-spacing heuristic 2.018/N^0.559 gives a well-ordered start.
  const double s = 2.018 / std::pow(static_cast<double>(n), 0.559);
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u[i] = (i - 0.5 * (n - 1)) * s;

  auto residual = [n](const Eigen::VectorXd& x) {
    Eigen::VectorXd f = x;
    for (int m = 0; m < n; ++m) {
      for (int k = 0; k < n; ++k) {
        if (k == m) continue;
        const double d = x[m] - x[k];
        f[m] += (k < m ? -1.0 : 1.0) / (d * d);
      }
    }
    return f;
  };
  // The residual is the gradient of the (convex, on the ordered cone)
  // potential 0.5 sum u^2 + sum_{m<n} 1/(u_n - u_m); line-searching on the
  // potential makes Newton globally convergent where the residual norm alone
  // can stall.
  auto potential = [n](const Eigen::VectorXd& x) {
    double v = 0.5 * x.squaredNorm();
    for (int m = 0; m < n; ++m)
      for (int k = m + 1; k < n; ++k) v += 1.0 / (x[k] - x[m]);
    return v;
  };
  auto jacobian = [n](const Eigen::VectorXd& x) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int m = 0; m < n; ++m) {
      double diag = 1.0;
      for (int k = 0; k < n; ++k) {
        if (k == m) continue;
        const double w = 2.0 / std::pow(std::abs(x[m] - x[k]), 3);
        diag += w;
        a(m, k) = -w;
      }
      a(m, m) = diag;
    }
    return a;
  };

  Eigen::VectorXd f = residual(u);
  double v = potential(u);
  double fn = f.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < 300 && fn > 1e-13; ++it) {
    const Eigen::VectorXd du = jacobian(u).ldlt().solve(-f);
    const double slope = f.dot(du); // negative: Newton descends the potential
    double lambda = 1.0;
    bool accepted = false;
    while (lambda > 1e-12) {
      Eigen::VectorXd trial = u + lambda * du;
      bool ordered = true;
      for (int i = 1; i < n; ++i)
        if (!(trial[i] > trial[i - 1])) { ordered = false; break; }
      if (ordered) {
        const double vt = potential(trial);
        const Eigen::VectorXd ft = residual(trial);
        const double ftn = ft.lpNorm<Eigen::Infinity>();
        // Near the minimum the Armijo decrease drops below the precision of
        // the potential itself; a shrinking residual is progress too.
        if (vt <= v + 1e-4 * lambda * slope || ftn < fn) {
          u = std::move(trial);
          v = vt;
          f = ft;
          fn = ftn;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted)
      throw numeric_error("equilibrium_positions: line search stalled");
  }
  if (fn > 1e-12)
    throw numeric_error("equilibrium_positions: Newton did not converge");
  return u;
}

struct ModeDecomposition {
  Eigen::VectorXd u{};     // dimensionless equilibrium positions
  double ell = 0.0;        // length scale, m
  Eigen::VectorXd freqs{}; // mode angular frequencies, ascending, rad/s
  Eigen::MatrixXd vecs{};  // vecs(i, p) = b_i^p, mass-weighted orthonormal
};

inline ModeDecomposition normal_modes(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n_ions();
  const double m_ref = spec.ref_mass();

  ModeDecomposition md;
  md.u = equilibrium_positions(n);
  md.ell = std::cbrt(constants::elementary_charge * constants::elementary_charge /
                     (4.0 * std::numbers::pi * constants::vacuum_permittivity *
                      m_ref * spec.omega_com * spec.omega_com));

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    double diag = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k == m) continue;
      const double w = 2.0 / std::pow(std::abs(md.u[m] - md.u[k]), 3);
      diag += w;
      a(m, k) = -w;
    }
    a(m, m) = diag;
  }

  // Mass-weighted symmetric form K = M^-1/2 A M^-1/2, M = diag(m_i/m_ref).
  Eigen::VectorXd inv_sqrt_m(n);
  for (int i = 0; i < n; ++i)
    inv_sqrt_m[i] = std::sqrt(m_ref / spec.masses[i]);
  const Eigen::MatrixXd k =
      inv_sqrt_m.asDiagonal() * a * inv_sqrt_m.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (k + k.transpose()));
  if (es.info() != Eigen::Success)
    throw numeric_error("normal_modes: eigensolver failed");

  md.freqs.resize(n);
  for (int p = 0; p < n; ++p) {
    const double mu = es.eigenvalues()[p];
    if (mu <= 0.0) throw numeric_error("normal_modes: non-positive eigenvalue");
    md.freqs[p] = spec.omega_com * std::sqrt(mu);
  }
  md.vecs = es.eigenvectors();
  // Deterministic sign: largest-magnitude component of each mode positive.
  for (int p = 0; p < n; ++p) {
    int imax = 0;
    md.vecs.col(p).cwiseAbs().maxCoeff(&imax);
    if (md.vecs(imax, p) < 0.0) md.vecs.col(p) *= -1.0;
  }
  return md;
}

// RMS thermal displacement of the center-of-mass mode.
inline double com_spread(const ChainSpec& spec) {
  spec.validate();
  double m_total = 0.0;
  for (double m : spec.masses) m_total += m;
  return std::sqrt(constants::k_boltzmann * spec.temperature /
                   (m_total * spec.omega_com * spec.omega_com));
}

// ---------------------------------------------------------------------------
// Thermal sampling.

struct ThermalSample {
  Eigen::VectorXd q{};   // mode amplitudes, m
  Eigen::VectorXd phi{}; // mode phases, rad
};

inline ThermalSample sample_thermal(const ChainSpec& spec,
                                    const ModeDecomposition& md, int n_modes,
                                    std::mt19937_64& rng) {
  if (n_modes < 1 || n_modes > spec.n_ions())
    throw config_error("sample_thermal: need 1 <= n_modes <= N");
  const double m_ref = spec.ref_mass();
  ThermalSample s;
  s.q.resize(n_modes);
  s.phi.resize(n_modes);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, two_pi);
  for (int p = 0; p < n_modes; ++p) {
    const double sigma = std::sqrt(constants::k_boltzmann * spec.temperature /
                                   (m_ref * md.freqs[p] * md.freqs[p]));
    s.q[p] = sigma * gauss(rng);
    s.phi[p] = unif(rng);
  }
  return s;
}

// Coupling trajectory of the communication ion for one thermal sample:
// x(t) = sum_p b_comm^p q_p cos(w_p t + phi_p) about its antinode.
inline CouplingTrajectory comm_trajectory(const ChainSpec& spec,
                                          const ModeDecomposition& md,
                                          const ThermalSample& s) {
  if (!(spec.cavity_wavelength > 0.0))
    throw config_error("comm_trajectory: cavity_wavelength must be positive");
  if (!(spec.g0 >= 0.0)) throw config_error("comm_trajectory: g0 must be >= 0");
  std::vector<MotionTone> tones;
  tones.reserve(s.q.size());
  for (int p = 0; p < s.q.size(); ++p)
    tones.push_back({md.vecs(spec.comm_index, p) * s.q[p], md.freqs[p], s.phi[p]});
  return CouplingTrajectory::mode_sum(spec.g0, spec.cavity_wavelength,
                                      std::move(tones));
}

inline CouplingTrajectory thermal_trajectory(const ChainSpec& spec, int n_modes,
                                             std::mt19937_64& rng) {
  const ModeDecomposition md = normal_modes(spec);
  const ThermalSample s = sample_thermal(spec, md, n_modes, rng);
  return comm_trajectory(spec, md, s);
}

// ---------------------------------------------------------------------------
// Monte Carlo thermal infidelity.

struct ThermalMcResult {
  double mean_infidelity = 0.0;
  double std_error = 0.0;
  double mean_p_herald = 0.0;
  int n_samples = 0;
  int n_failed = 0;
  std::uint64_t seed = 0;
};

// One thermal trajectory per sample, applied to both atoms (the communication
// ions of both chains ride statistically identical motion; a shared draw is
// the conservative, fully correlated choice for the sender/receiver pair).
// Averages 1 - fidelity over heralded samples.
inline ThermalMcResult thermal_infidelity_mc(const ChainSpec& spec,
                                             const ProtocolConfig& base,
                                             int n_modes, int n_samples,
                                             std::uint64_t seed) {
  spec.validate();
  base.validate();
  if (n_samples < 1)
    throw config_error("thermal_infidelity_mc: need n_samples >= 1");

  const ModeDecomposition md = normal_modes(spec);

  double sum = 0.0, sumsq = 0.0, herald_sum = 0.0;
  int n_ok = 0, n_failed = 0;
  for (int i = 0; i < n_samples; ++i) {
    auto rng = substream_rng(seed, static_cast<std::uint64_t>(i));
    const ThermalSample s = sample_thermal(spec, md, n_modes, rng);
    ProtocolConfig cfg = base;
    cfg.transfer.traj_a = comm_trajectory(spec, md, s);
    cfg.transfer.traj_b = cfg.transfer.traj_a;
    try {
      const BellOutcome out = full_protocol_sim(cfg);
      if (!out.fidelity) {
        ++n_failed;
        continue;
      }
      const double infid = 1.0 - *out.fidelity;
      sum += infid;
      sumsq += infid * infid;
      herald_sum += out.p_herald;
      ++n_ok;
    } catch (const numeric_error&) {
      ++n_failed;
    }
  }
  if (n_ok == 0)
    throw numeric_error("thermal_infidelity_mc: every sample failed");

  ThermalMcResult r;
  r.n_samples = n_samples;
  r.n_failed = n_failed;
  r.seed = seed;
  r.mean_infidelity = sum / n_ok;
  r.mean_p_herald = herald_sum / n_ok;
  if (n_ok > 1) {
    const double var =
        (sumsq - sum * sum / n_ok) / (static_cast<double>(n_ok) - 1.0);
    r.std_error = std::sqrt(std::max(var, 0.0) / n_ok);
  }
  return r;
}

} // namespace cavlink
