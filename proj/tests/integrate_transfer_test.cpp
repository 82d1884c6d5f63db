#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <cstring>

#include "cavlink/constants.hpp"
#include "cavlink/integrate.hpp"
#include "cavlink/transfer.hpp"

using namespace cavlink;

namespace {

using Vec2 = Eigen::Matrix<cxd, 2, 1>;

TEST(Integrator, TwoLevelRabiOracle) {
  // H = (Omega/2) sigma_x: P_e(t) = sin^2(Omega t / 2).
  const double omega = mhz_2pi(3.0);
  IntegratorOptions opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 1e-13;
  auto rhs = [omega](double, const Vec2& y, Vec2& dy) {
    dy[0] = cxd(0.0, -0.5 * omega) * y[1];
    dy[1] = cxd(0.0, -0.5 * omega) * y[0];
  };
  Vec2 y;
  y << 1.0, 0.0;
  const double t1 = 2.35e-6;
  integrate_rk45(rhs, y, 0.0, t1, opt);
  const double expect = std::sin(0.5 * omega * t1) * std::sin(0.5 * omega * t1);
  EXPECT_NEAR(std::norm(y[1]), expect, 1e-6);
  EXPECT_NEAR(std::norm(y[0]) + std::norm(y[1]), 1.0, 1e-9);
}

TEST(Integrator, PureDecayOracle) {
  // dc/dt = -(Gamma/2) c: population e^(-Gamma t).
  const double gamma = mhz_2pi(25.0);
  IntegratorOptions opt;
  auto rhs = [gamma](double, const Vec2& y, Vec2& dy) {
    dy[0] = -0.5 * gamma * y[0];
    dy[1] = 0.0;
  };
  Vec2 y;
  y << 1.0, 0.0;
  const double t1 = 3.0e-8;
  integrate_rk45(rhs, y, 0.0, t1, opt);
  EXPECT_NEAR(std::norm(y[0]), std::exp(-gamma * t1), 1e-6);
}

TEST(Integrator, RejectsBadTolerances) {
  IntegratorOptions opt;
  opt.rel_tol = 0.0;
  Vec2 y;
  y << 1.0, 0.0;
  auto rhs = [](double, const Vec2&, Vec2& dy) { dy.setZero(); };
  EXPECT_THROW(integrate_rk45(rhs, y, 0.0, 1.0, opt), config_error);
}

// ---------------------------------------------------------------------------

TransferConfig ion_config(double omega0_mhz = 18.0) {
  TransferConfig cfg;
  cfg.cavity = {mhz_2pi(5.8), mhz_2pi(5.8), mhz_2pi(0.340), mhz_2pi(25.0), 0.0};
  cfg.pulse.omega0 = mhz_2pi(omega0_mhz);
  cfg.pulse.duration = 1e-6;
  return cfg;
}

TransferConfig ion_preset_config() {
  TransferConfig cfg = ion_config(26.0);
  cfg.pulse.shape = {0.88, 0.12, 0.38};
  return cfg;
}

TransferConfig rydberg_config() {
  TransferConfig cfg;
  cfg.cavity = {mhz_2pi(2.8), mhz_2pi(2.8), mhz_2pi(0.053), mhz_2pi(6.0), 0.0};
  cfg.pulse.omega0 = mhz_2pi(8.6);
  cfg.pulse.duration = 2e-6;
  cfg.pulse.shape = {0.75, 0.25, 0.28};
  return cfg;
}

TEST(Transfer, IonParametersReachPaperEfficiency) {
  // Default pulse shape at the paper operating point.
  const TransferResult r = evolve_transfer(ion_config());
  EXPECT_NEAR(r.p_success, 0.40, 0.10);
  EXPECT_LT(r.conservation_defect(), 1e-6);
}

TEST(Transfer, IonPresetShape) {
  const TransferResult r = evolve_transfer(ion_preset_config());
  EXPECT_NEAR(r.p_success, 0.40, 0.10);
  EXPECT_LT(r.conservation_defect(), 1e-6);
}

TEST(Transfer, RydbergParametersReachPaperEfficiency) {
  const TransferResult r = evolve_transfer(rydberg_config());
  EXPECT_GE(r.p_success, 0.6);
  EXPECT_LT(r.conservation_defect(), 1e-6);
}

TEST(Transfer, ZeroDriveLeavesEverythingBehind) {
  TransferConfig cfg = ion_config(0.0);
  const TransferResult r = evolve_transfer(cfg);
  EXPECT_EQ(std::abs(r.alpha), 0.0);
  EXPECT_EQ(r.p_success, 0.0);
  EXPECT_NEAR(r.p_leftover, 1.0, 1e-9);
  EXPECT_NEAR(r.p_cavity_loss + r.p_scatter_a + r.p_scatter_b, 0.0, 1e-12);
}

TEST(Transfer, HermitianLimitConservesNorm) {
  TransferConfig cfg = ion_config();
  cfg.cavity.kappa = cfg.cavity.gamma = 0.0;
  cfg.pulse.duration = 10e-6;
  const TransferResult r = evolve_transfer(cfg);
  EXPECT_NEAR(r.p_success + r.p_leftover, 1.0, 1e-9);
  EXPECT_EQ(r.p_cavity_loss + r.p_scatter_a + r.p_scatter_b, 0.0);
}

TEST(Transfer, AdiabaticLimitTransfersCompletely) {
  // Loss-free, slow: the dark state carries everything across.
  TransferConfig cfg = ion_config();
  cfg.cavity.kappa = cfg.cavity.gamma = 0.0;
  double last_p = 0.0;
  for (double t_us : {1.0, 2.0, 4.0}) {
    cfg.pulse.duration = t_us * 1e-6;
    last_p = evolve_transfer(cfg).p_success;
  }
  EXPECT_GT(last_p, 0.98);
}

TEST(Transfer, AlphaIsRealOnResonance) {
  // Delta = 0 makes the chain bipartite: alpha has no imaginary part.
  const TransferResult r = evolve_transfer(ion_preset_config());
  EXPECT_LT(std::abs(r.alpha.imag()), 1e-9);
  EXPECT_GT(r.alpha.real(), 0.0);
}

TEST(Transfer, LedgerConservationAcrossParameterGrid) {
  for (double om : {6.0, 12.0, 18.0, 30.0}) {
    for (double t_us : {0.5, 1.0, 2.0}) {
      TransferConfig cfg = ion_config(om);
      cfg.pulse.duration = t_us * 1e-6;
      const TransferResult r = evolve_transfer(cfg);
      EXPECT_LT(r.conservation_defect(), 1e-6)
          << "omega0=2pi*" << om << " MHz, T=" << t_us << " us";
    }
  }
}

TEST(Transfer, SuccessDecreasesWithCavityLoss) {
  double last = 1.0;
  for (double kappa_mhz : {0.1, 0.34, 1.0, 3.0}) {
    TransferConfig cfg = ion_config();
    cfg.cavity.kappa = mhz_2pi(kappa_mhz);
    const double p = evolve_transfer(cfg).p_success;
    EXPECT_LT(p, last);
    last = p;
  }
}

TEST(Transfer, Deterministic) {
  const TransferResult a = evolve_transfer(ion_preset_config());
  const TransferResult b = evolve_transfer(ion_preset_config());
  EXPECT_TRUE(std::memcmp(&a, &b, sizeof(TransferResult)) == 0);
}

// ---------------------------------------------------------------------------

TEST(Landscape, SingleCellMatchesEvolve) {
  const TransferConfig base = ion_preset_config();
  const auto cells = scan_landscape(base, {base.pulse.omega0}, {base.pulse.duration});
  ASSERT_EQ(cells.size(), 1u);
  ASSERT_TRUE(cells[0].ok());
  const TransferResult direct = evolve_transfer(base);
  EXPECT_EQ(cells[0].result->p_success, direct.p_success);
  EXPECT_EQ(cells[0].result->p_cavity_loss, direct.p_cavity_loss);
}

TEST(Landscape, RowMajorOrdering) {
  const TransferConfig base = ion_config();
  const std::vector<double> oms = {mhz_2pi(12.0), mhz_2pi(20.0)};
  const std::vector<double> ts = {0.5e-6, 1.0e-6};
  const auto cells = scan_landscape(base, oms, ts);
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells[0].omega0, oms[0]);
  EXPECT_EQ(cells[0].duration, ts[0]);
  EXPECT_EQ(cells[1].omega0, oms[0]);
  EXPECT_EQ(cells[1].duration, ts[1]);
  EXPECT_EQ(cells[2].omega0, oms[1]);
  EXPECT_EQ(cells[3].duration, ts[1]);
}

TEST(Landscape, EveryCellConserves) {
  const TransferConfig base = ion_config();
  const auto cells = scan_landscape(
      base, {mhz_2pi(8.0), mhz_2pi(18.0), mhz_2pi(28.0)}, {0.6e-6, 1.0e-6});
  for (const auto& c : cells) {
    ASSERT_TRUE(c.ok());
    EXPECT_LT(c.result->conservation_defect(), 1e-6);
  }
}

TEST(Landscape, FailedCellsAreMarkedNotFatal) {
  // An absurd drive strength forces step underflow in that cell only.
  const TransferConfig base = ion_config();
  const auto cells =
      scan_landscape(base, {mhz_2pi(18.0), 1e30}, {1.0e-6});
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_TRUE(cells[0].ok());
  EXPECT_FALSE(cells[1].ok());
  EXPECT_FALSE(cells[1].error.empty());
}

TEST(Landscape, RejectsBadGrids) {
  const TransferConfig base = ion_config();
  EXPECT_THROW(scan_landscape(base, {}, {1e-6}), config_error);
  EXPECT_THROW(scan_landscape(base, {mhz_2pi(18.0)}, {-1e-6}), config_error);
}

TEST(Landscape, PaperOperatingPointRegion) {
  const TransferConfig base = ion_config();
  const auto cells = scan_landscape(
      base, {mhz_2pi(14.0), mhz_2pi(18.0), mhz_2pi(22.0)}, {0.8e-6, 1.0e-6});
  double best = 0.0;
  for (const auto& c : cells) best = std::max(best, c.result->p_success);
  EXPECT_GE(best, 0.30);
  EXPECT_LE(best, 0.50);
}

// ---------------------------------------------------------------------------

TEST(Optimize, SyntheticQuadratic) {
  const double m = 7.3;
  const auto r = maximize_scalar(
      [m](double x) { return 1.0 - (x - m) * (x - m); }, 1.0, 12.0);
  EXPECT_NEAR(r.omega0_star, m, 1e-2);
  EXPECT_NEAR(r.p_star, 1.0, 1e-4);
}

TEST(Optimize, BoundaryErrorReportsBetterEndpoint) {
  try {
    maximize_scalar([](double x) { return x; }, 1.0, 5.0);
    FAIL() << "expected boundary_error";
  } catch (const boundary_error& e) {
    EXPECT_DOUBLE_EQ(e.omega0, 5.0);
    EXPECT_DOUBLE_EQ(e.p, 5.0);
  }
}

TEST(Optimize, IonBracketContainsPaperOperatingPoint) {
  const TransferConfig base = ion_config();
  const auto r = optimize_omega0(base, mhz_2pi(5.0), mhz_2pi(40.0));
  EXPECT_GE(r.omega0_star, mhz_2pi(10.0));
  EXPECT_LE(r.omega0_star, mhz_2pi(30.0));
  EXPECT_GE(r.p_star, 0.30);
  EXPECT_LE(r.p_star, 0.50);
}

TEST(Optimize, FirstOrderInsensitiveAtOptimum) {
  // Central finite difference of |alpha| at the optimum, relative step 1e-3.
  const TransferConfig base = ion_config();
  const auto opt = optimize_omega0(base, mhz_2pi(5.0), mhz_2pi(40.0));
  auto alpha_mag = [&](double w) {
    TransferConfig cfg = base;
    cfg.pulse.omega0 = w;
    return std::abs(evolve_transfer(cfg).alpha);
  };
  const double w = opt.omega0_star;
  const double h = 1e-3 * w;
  const double deriv = (alpha_mag(w + h) - alpha_mag(w - h)) / (2.0 * h);
  const double a = alpha_mag(w);
  EXPECT_LE(std::abs(deriv), 1e-2 * a / w);
}

// ---------------------------------------------------------------------------

TEST(Cooperativity, PaperValues) {
  const double c_ion = cooperativity(
      {mhz_2pi(5.8), mhz_2pi(5.8), mhz_2pi(0.340), mhz_2pi(25.0), 0.0});
  EXPECT_NEAR(c_ion, 3.96, 0.05);
  const double c_ryd = cooperativity(
      {mhz_2pi(2.8), mhz_2pi(2.8), mhz_2pi(0.053), mhz_2pi(6.0), 0.0});
  EXPECT_NEAR(c_ryd, 24.7, 0.3);
}

TEST(Cooperativity, GeometricMeanOfUnequalCouplings) {
  const double c = cooperativity({2.0, 8.0, 2.0, 2.0, 0.0});
  EXPECT_DOUBLE_EQ(c, 4.0); // g_eff^2 = g_a g_b = 16
}

TEST(Cooperativity, RequiresPositiveRates) {
  EXPECT_THROW(cooperativity({1.0, 1.0, 0.0, 1.0, 0.0}), config_error);
  EXPECT_THROW(cooperativity({1.0, 1.0, 1.0, 0.0, 0.0}), config_error);
}

TEST(Backscatter, ZeroBranchingGivesZero) {
  TransferResult r;
  r.p_scatter_a = 0.3;
  r.p_scatter_b = 0.2;
  r.p_success = 0.4;
  const auto e = backscatter_error(r, {0.0});
  EXPECT_EQ(e.per_attempt, 0.0);
}

TEST(Backscatter, UnitScatterGivesBranching) {
  TransferResult r;
  r.p_scatter_a = 0.6;
  r.p_scatter_b = 0.4;
  r.p_success = 0.0;
  const auto e = backscatter_error(r, {0.25});
  EXPECT_DOUBLE_EQ(e.per_attempt, 0.25);
  EXPECT_FALSE(e.per_heralded_pair.has_value()); // undefined at p = 0
}

TEST(Backscatter, IonPresetLandsInPaperBand) {
  const TransferResult r = evolve_transfer(ion_preset_config());
  const BranchingSpec b{}; // default 0.029 * 3/25
  const auto e = backscatter_error(r, b);
  EXPECT_GE(e.per_attempt, 1e-4);
  EXPECT_LE(e.per_attempt, 1e-3);
  ASSERT_TRUE(e.per_heralded_pair.has_value());
  EXPECT_NEAR(*e.per_heralded_pair, e.per_attempt / r.p_success, 1e-15);
}

} // namespace
