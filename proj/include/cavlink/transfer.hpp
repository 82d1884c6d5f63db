#pragma once

// Heralded photon transfer through the cavity bus: non-Hermitian 5-state
// evolution with an explicit loss ledger (cavity decay, scatter at A, scatter
// at B), landscape scans over (Omega0, T), and 1-D pulse-strength optimization.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cavlink/cavity.hpp"
#include "cavlink/errors.hpp"
#include "cavlink/integrate.hpp"
#include "cavlink/pulse.hpp"
#include "cavlink/trajectory.hpp"

namespace cavlink {

struct TransferConfig {
  CavityAtomParams cavity{};
  PulseProfile pulse{};
  // Motional modulation of g_A, g_B; nominal constant coupling when unset.
  std::optional<CouplingTrajectory> traj_a{};
  std::optional<CouplingTrajectory> traj_b{};
  IntegratorOptions integrator{};
  // Absolute start time of this window; trajectories are sampled at
  // window_start + t so a second pulse sees the same motion later in phase.
  double window_start = 0.0;

  void validate() const {
    cavity.validate();
    pulse.validate();
    integrator.validate();
    if (!std::isfinite(window_start) || window_start < 0.0)
      throw config_error("transfer: window_start must be finite and >= 0");
  }
};

struct TransferResult {
  cxd alpha{};                // final amplitude on |r>_B
  double p_success = 0.0;     // |alpha|^2
  double p_cavity_loss = 0.0; // photon decayed through the mirrors
  double p_scatter_a = 0.0;   // spontaneous scatter at the sender
  double p_scatter_b = 0.0;   // spontaneous scatter at the receiver
  double p_leftover = 0.0;    // population still in transit at t = T

  double conservation_defect() const {
    return std::abs(p_success + p_cavity_loss + p_scatter_a + p_scatter_b +
                    p_leftover - 1.0);
  }
};

// Evolves |r>_A through the bus over one window [0, T].  The state is
// augmented with the three loss integrals so the ledger shares the
// integrator's error control.
inline TransferResult evolve_transfer(const TransferConfig& cfg) {
  cfg.validate();
  const CouplingTrajectory ta =
      cfg.traj_a ? *cfg.traj_a : CouplingTrajectory::constant(cfg.cavity.g_a);
  const CouplingTrajectory tb =
      cfg.traj_b ? *cfg.traj_b : CouplingTrajectory::constant(cfg.cavity.g_b);

  using Aug = Eigen::Matrix<cxd, 8, 1>;
  const double kappa = cfg.cavity.kappa;
  const double gamma = cfg.cavity.gamma;
  const double t0 = cfg.window_start;

  auto rhs = [&](double t, const Aug& y, Aug& dy) {
    const Ham5 h =
        hamiltonian_at(cfg.cavity, cfg.pulse, ta, tb, t, t0 + t);
    const auto c = y.template head<5>();
    dy.template head<5>() = cxd(0.0, -1.0) * (h * c);
    dy[5] = kappa * std::norm(y[2]);
    dy[6] = gamma * std::norm(y[1]);
    dy[7] = gamma * std::norm(y[3]);
  };

  Aug y = Aug::Zero();
  y[0] = 1.0;

  double last_norm = 1.0;
  auto monitor = [&](double, const Aug& s) {
    const double n = s.template head<5>().squaredNorm();
    if (n > last_norm + 1e-9 || n > 1.0 + 1e-9)
      throw numeric_error("evolve_transfer: norm increased along a lossy run");
    last_norm = n;
  };

  integrate_rk45(rhs, y, 0.0, cfg.pulse.duration, cfg.integrator, monitor);

  TransferResult r;
  r.alpha = y[4];
  r.p_success = std::norm(y[4]);
  r.p_cavity_loss = y[5].real();
  r.p_scatter_a = y[6].real();
  r.p_scatter_b = y[7].real();
  r.p_leftover =
      std::norm(y[0]) + std::norm(y[1]) + std::norm(y[2]) + std::norm(y[3]);
  return r;
}

// ---------------------------------------------------------------------------
// Landscape scan over (Omega0, T).

struct LandscapeCell {
  double omega0 = 0.0;
  double duration = 0.0;
  std::optional<TransferResult> result{};
  std::string error{};

  bool ok() const { return result.has_value(); }
};

// Row-major: omega0 is the outer loop, duration the inner one.  Failed cells
// carry the error message instead of aborting the scan.
inline std::vector<LandscapeCell> scan_landscape(
    const TransferConfig& base, const std::vector<double>& omega0_grid,
    const std::vector<double>& duration_grid) {
  if (omega0_grid.empty() || duration_grid.empty())
    throw config_error("scan_landscape: grids must be non-empty");
  for (double w : omega0_grid)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw config_error("scan_landscape: omega0 grid must be finite and >= 0");
  for (double T : duration_grid)
    if (!(T > 0.0) || !std::isfinite(T))
      throw config_error("scan_landscape: duration grid must be positive");

  std::vector<LandscapeCell> cells;
  cells.reserve(omega0_grid.size() * duration_grid.size());
  for (double w : omega0_grid) {
    for (double T : duration_grid) {
      LandscapeCell cell;
      cell.omega0 = w;
      cell.duration = T;
      TransferConfig cfg = base;
      cfg.pulse.omega0 = w;
      cfg.pulse.duration = T;
      try {
        cell.result = evolve_transfer(cfg);
      } catch (const error& e) {
        cell.error = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

// ---------------------------------------------------------------------------
// 1-D maximization: 16-point coarse scan, then golden-section refinement
// around the best coarse cell.  Derivative-free (each evaluation is a solve).

struct OptimizeResult {
  double omega0_star = 0.0;
  double p_star = 0.0;
  int evaluations = 0;
};

template <typename F>
OptimizeResult maximize_scalar(F&& f, double lo, double hi,
                               int coarse_points = 16,
                               double xtol_rel = 1e-4) {
  if (!(lo < hi) || !(lo > 0.0))
    throw config_error("maximize_scalar: bracket must be positive and ordered");
  if (coarse_points < 3)
    throw config_error("maximize_scalar: need at least 3 coarse points");

  int evals = 0;
  auto eval = [&](double x) {
    ++evals;
    return f(x);
  };

  std::vector<double> xs(coarse_points), fs(coarse_points);
  for (int i = 0; i < coarse_points; ++i) {
    xs[i] = lo + (hi - lo) * i / (coarse_points - 1);
    fs[i] = eval(xs[i]);
  }
  int best = 0;
  for (int i = 1; i < coarse_points; ++i)
    if (fs[i] > fs[best]) best = i;

  if (best == 0 || best == coarse_points - 1)
    throw boundary_error(
        "maximize_scalar: no interior maximum in bracket; best endpoint "
        "reported",
        xs[best], fs[best]);

  double a = xs[best - 1], b = xs[best + 1];
  double bx = xs[best], bf = fs[best];
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = eval(c), fd = eval(d);
  const double xtol = xtol_rel * (hi - lo);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = eval(d);
    }
    if (fc > bf) { bf = fc; bx = c; }
    if (fd > bf) { bf = fd; bx = d; }
  }
  return {bx, bf, evals};
}

inline OptimizeResult optimize_omega0(const TransferConfig& base, double lo,
                                      double hi) {
  return maximize_scalar(
      [&](double w) {
        TransferConfig cfg = base;
        cfg.pulse.omega0 = w;
        return evolve_transfer(cfg).p_success;
      },
      lo, hi);
}

// ---------------------------------------------------------------------------
// False heralds from photons scattered back into the herald mode.

struct BranchingSpec {
  // Branching ratio x (solid angle / collection) share; default is the
  // D-state branching 0.029 scaled by 3/25 mode matching.
  double p_backscatter_branch = 0.029 * 3.0 / 25.0;

  void validate() const {
    if (!(p_backscatter_branch >= 0.0 && p_backscatter_branch <= 1.0))
      throw config_error("branching: p_backscatter_branch must be in [0, 1]");
  }
};

struct BackscatterError {
  double per_attempt = 0.0;
  std::optional<double> per_heralded_pair{}; // empty when p_success = 0
};

inline BackscatterError backscatter_error(const TransferResult& r,
                                          const BranchingSpec& b) {
  b.validate();
  BackscatterError out;
  out.per_attempt =
      b.p_backscatter_branch * (r.p_scatter_a + r.p_scatter_b);
  if (r.p_success > 0.0)
    out.per_heralded_pair = out.per_attempt / r.p_success;
  return out;
}

} // namespace cavlink
