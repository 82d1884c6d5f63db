#pragma once

// Symmetrized heralded Bell protocol: two sequential photon transfers, one per
// logical component, composed into the entangled state
//   amp_00 |0>_A|r0>_B + amp_11 |1>_A|r1>_B + (loss terms),
// heralded by finding B outside its ground states.  Heralding removes loss
// bias: fidelity depends only on the amplitude ratio, not the common scale.

#include <cmath>
#include <complex>
#include <optional>

#include "cavlink/errors.hpp"
#include "cavlink/transfer.hpp"

namespace cavlink {

struct ProtocolState {
  cxd amp_00{};             // second-transferred component
  cxd amp_11{};             // first-transferred component (accrues phi)
  double loss_weight = 0.0; // everything that left the protocol manifold
};

struct BellOutcome {
  double p_herald = 0.0;
  std::optional<double> fidelity{}; // empty when p_herald = 0
  double relative_phase = 0.0;      // arg(amp_11) - arg(amp_00)
};

inline ProtocolState build_protocol_state(const TransferResult& first,
                                          const TransferResult& second,
                                          double interpulse_phase) {
  ProtocolState st;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  st.amp_00 = second.alpha * inv_sqrt2;
  st.amp_11 = std::polar(1.0, interpulse_phase) * first.alpha * inv_sqrt2;
  st.loss_weight = 1.0 - std::norm(st.amp_00) - std::norm(st.amp_11);
  return st;
}

inline BellOutcome herald_outcome(const ProtocolState& st) {
  BellOutcome out;
  out.p_herald = std::norm(st.amp_00) + std::norm(st.amp_11);
  if (out.p_herald > 0.0) {
    out.fidelity = std::norm(st.amp_00 + st.amp_11) / (2.0 * out.p_herald);
    out.relative_phase = std::arg(st.amp_11) - std::arg(st.amp_00);
  }
  return out;
}

inline BellOutcome run_protocol(const TransferResult& first,
                                const TransferResult& second,
                                double interpulse_phase) {
  return herald_outcome(build_protocol_state(first, second, interpulse_phase));
}

// Infidelity from an amplitude mismatch eps = |alpha'| - |alpha| at phi = 0.
inline double mismatch_infidelity(double alpha_mag, double epsilon) {
  if (!(alpha_mag > 0.0))
    throw config_error("mismatch_infidelity: alpha_mag must be positive");
  if (!(std::abs(epsilon) < alpha_mag))
    throw config_error("mismatch_infidelity: need |epsilon| < alpha_mag");
  const double a = alpha_mag;
  const double b = a + epsilon;
  return epsilon * epsilon / (2.0 * (a * a + b * b));
}

struct ErrorBudget {
  double eps_local = 0.0;
  double eps_m = 0.0;
  double eps_bell = 0.0;

  void validate() const {
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in01(eps_local) || !in01(eps_m) || !in01(eps_bell))
      throw config_error("error budget: entries must be in [0, 1]");
  }
};

// eps_CNOT for a teleported gate: two local CNOTs, two measurements, one Bell pair.
inline double teleported_cnot_error(const ErrorBudget& b) {
  b.validate();
  return 2.0 * b.eps_local + 2.0 * b.eps_m + b.eps_bell;
}

// ---------------------------------------------------------------------------
// Full two-window protocol simulation.

struct ProtocolConfig {
  TransferConfig transfer{};
  double interpulse_gap = 0.0;  // dead time between the two windows, s
  double swap_error = 0.0;      // scalar error of the interpulse swaps
  double interpulse_phase = 0.0;

  void validate() const {
    transfer.validate();
    if (!(interpulse_gap >= 0.0) || !std::isfinite(interpulse_gap))
      throw config_error("protocol: interpulse_gap must be finite and >= 0");
    if (!(swap_error >= 0.0 && swap_error <= 1.0))
      throw config_error("protocol: swap_error must be in [0, 1]");
    if (!std::isfinite(interpulse_phase))
      throw config_error("protocol: interpulse_phase must be finite");
  }
};

// Two transfers: the first over [0, T], the second over
// [T + gap, 2T + gap], both sampling the same coupling trajectories at
// absolute time.  Interpulse swaps are instantaneous with a scalar error.
inline BellOutcome full_protocol_sim(const ProtocolConfig& cfg) {
  cfg.validate();
  const TransferResult first = evolve_transfer(cfg.transfer);

  TransferConfig second_cfg = cfg.transfer;
  second_cfg.window_start =
      cfg.transfer.window_start + cfg.transfer.pulse.duration + cfg.interpulse_gap;
  const TransferResult second = evolve_transfer(second_cfg);

  BellOutcome out = run_protocol(first, second, cfg.interpulse_phase);
  if (out.fidelity) *out.fidelity *= 1.0 - cfg.swap_error;
  return out;
}

} // namespace cavlink
