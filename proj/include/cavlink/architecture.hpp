#pragma once

// Closed-form architecture models: entanglement distribution rates versus
// competing modalities, serial timing budget, cavity geometry derivations,
// capacity packing, and the swap/teleport/storage error scalings.

#include <cmath>
#include <vector>

#include "cavlink/constants.hpp"
#include "cavlink/errors.hpp"

namespace cavlink {

struct ArchitectureParams {
  double tau_serial = 5.3e-6;  // per-pair serialized time in one cavity, s
  double tau_parallel = 28e-6; // parallelizable overhead (herald/readout), s
  double p_success = 0.40;
  int ions_per_chain = 25;

  void validate() const {
    if (!(tau_serial >= 0.0) || !(tau_parallel >= 0.0))
      throw config_error("architecture: times must be >= 0");
    if (!(p_success > 0.0 && p_success <= 1.0))
      throw config_error("architecture: p_success must be in (0, 1]");
    if (ions_per_chain < 1)
      throw config_error("architecture: ions_per_chain must be >= 1");
  }
};

struct TimingBudget {
  double transfer_time = 1.0e-6; // s
  double raman_rabi = 0.0;       // rad/s
  int n_transfers = 2;
  int n_rotations = 4;

  void validate() const {
    if (!(transfer_time > 0.0) || !(raman_rabi > 0.0))
      throw config_error("timing: transfer_time and raman_rabi must be positive");
    if (n_transfers < 0 || n_rotations < 0)
      throw config_error("timing: counts must be >= 0");
  }
};

// SK1 composite pulse: 5*pi of rotation at the Raman Rabi frequency.
inline double sk1_duration(double raman_rabi) {
  if (!(raman_rabi > 0.0))
    throw config_error("sk1_duration: raman_rabi must be positive");
  return 5.0 * std::numbers::pi / raman_rabi;
}

inline double serial_budget(const TimingBudget& b) {
  b.validate();
  return b.n_transfers * b.transfer_time +
         b.n_rotations * sk1_duration(b.raman_rabi);
}

// Average time to distribute Bell pairs to M chains sharing one cavity:
// (tau_parallel + M tau_serial / 2) / p.
inline double distribution_time(const ArchitectureParams& par, int m_chains) {
  par.validate();
  if (m_chains < 0 || m_chains % 2 != 0)
    throw config_error("distribution_time: M must be even and >= 0 (pairs)");
  return (par.tau_parallel + 0.5 * m_chains * par.tau_serial) / par.p_success;
}

// ---------------------------------------------------------------------------
// Competing modalities.

struct PhotonicParams {
  double two_ion_time = 5e-3;              // s
  double purification_factor = 2.0;
  double insertion_loss_db_per_photon = 1.3;
  int photons_per_attempt = 2;
  double switch_overhead = 10e-3;          // s

  void validate() const {
    if (!(two_ion_time > 0.0) || !(purification_factor > 0.0) ||
        !(insertion_loss_db_per_photon >= 0.0) || photons_per_attempt < 0 ||
        !(switch_overhead >= 0.0))
      throw config_error("photonic: parameters out of range");
  }
};

enum class PhotonicVariant { bare, overheads };

inline double photonic_time(const PhotonicParams& p, PhotonicVariant variant) {
  p.validate();
  if (variant == PhotonicVariant::bare) return p.two_ion_time;
  const double transmission = std::pow(
      10.0, -p.photons_per_attempt * p.insertion_loss_db_per_photon / 10.0);
  return p.switch_overhead +
         p.purification_factor * p.two_ion_time / transmission;
}

struct ShuttlingParams {
  double per_op_time = 1e-3; // bundles split/merge/recool, s

  void validate() const {
    if (!(per_op_time > 0.0))
      throw config_error("shuttling: per_op_time must be positive");
  }
};

inline double shuttling_time(const ShuttlingParams& s, int m_chains) {
  s.validate();
  if (m_chains < 0) throw config_error("shuttling_time: M must be >= 0");
  return s.per_op_time * m_chains;
}

struct RateCurveRow {
  int m = 0;
  long n = 0;
  double t_cavity = 0.0;
  double t_photonic_bare = 0.0;
  double t_photonic_over = 0.0;
  double t_shuttling = 0.0;
  bool beyond_single_cavity = false; // N > 500
};

inline std::vector<RateCurveRow> rate_curves(const ArchitectureParams& arch,
                                             const PhotonicParams& phot,
                                             const ShuttlingParams& shut,
                                             const std::vector<int>& m_values) {
  if (m_values.empty()) throw config_error("rate_curves: empty M range");
  std::vector<RateCurveRow> rows;
  rows.reserve(m_values.size());
  for (int m : m_values) {
    RateCurveRow row;
    row.m = m;
    row.n = static_cast<long>(m) * arch.ions_per_chain;
    row.t_cavity = distribution_time(arch, m);
    row.t_photonic_bare = photonic_time(phot, PhotonicVariant::bare);
    row.t_photonic_over = photonic_time(phot, PhotonicVariant::overheads);
    row.t_shuttling = shuttling_time(shut, m);
    row.beyond_single_cavity = row.n > 500;
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Error scalings.

// Swap chain over distance d: eps_R + 3 (d-1) eps_R, 3 local CNOTs per swap.
inline double swap_gate_error(int d, double eps_r) {
  if (d < 1) throw config_error("swap_gate_error: d must be >= 1");
  if (!(eps_r >= 0.0 && eps_r <= 1.0))
    throw config_error("swap_gate_error: eps_r must be in [0, 1]");
  return std::min(1.0, eps_r + 3.0 * (d - 1) * eps_r);
}

struct ScalingQuery {
  long n_qubits = 0;
  double dimension = 2.0; // connectivity dimension; INFINITY for any-to-any
  double n_parallel = 1.0;
  double gate_time = 0.0;     // s
  double qubit_lifetime = 0.0; // s
  double eps_r = 0.0;

  void validate() const {
    if (n_qubits < 0) throw config_error("scaling: n_qubits must be >= 0");
    if (!(dimension >= 1.0)) throw config_error("scaling: dimension must be >= 1");
    if (!(n_parallel >= 1.0))
      throw config_error("scaling: n_parallel must be >= 1");
    if (!(gate_time >= 0.0)) throw config_error("scaling: gate_time must be >= 0");
    if (!(eps_r >= 0.0 && eps_r <= 1.0))
      throw config_error("scaling: eps_r must be in [0, 1]");
  }
};

// Probability of a storage error among N qubits during one gate: N T / tau.
inline double storage_error(const ScalingQuery& q) {
  q.validate();
  if (!(q.qubit_lifetime > 0.0))
    throw config_error("storage_error: qubit_lifetime must be positive");
  return std::min(1.0, q.n_qubits * q.gate_time / q.qubit_lifetime);
}

// Relative nonlocal-gate time: N^(1+1/D) / N*, with 1/D = 0 as D -> infinity.
inline double nonlocal_time_scaling(const ScalingQuery& q) {
  q.validate();
  const double inv_d = std::isinf(q.dimension) ? 0.0 : 1.0 / q.dimension;
  return std::pow(static_cast<double>(q.n_qubits), 1.0 + inv_d) / q.n_parallel;
}

// ---------------------------------------------------------------------------
// Cavity geometry and capacity packing.

struct CavityGeometry {
  double length = 0.0;     // m
  double finesse = 0.0;
  double waist = 0.0;      // m
  double wavelength = 0.0; // m

  void validate() const {
    if (!(length > 0.0) || !(finesse > 0.0) || !(waist > 0.0) ||
        !(wavelength > 0.0))
      throw config_error("geometry: all fields must be positive");
  }
};

struct DerivedCavity {
  double fsr = 0.0;      // rad/s
  double kappa = 0.0;    // rad/s, full energy decay rate
  double ringdown = 0.0; // s
  double rayleigh = 0.0; // m
};

inline DerivedCavity derived_cavity(const CavityGeometry& g) {
  g.validate();
  DerivedCavity d;
  d.fsr = std::numbers::pi * constants::speed_of_light / g.length;
  d.kappa = d.fsr / g.finesse;
  d.ringdown = 1.0 / d.kappa;
  d.rayleigh = std::numbers::pi * g.waist * g.waist / g.wavelength;
  return d;
}

struct IonCapacity {
  double total_extent = 0.0; // m
  bool fits = false;         // within +/- z_R
  long n_qubits = 0;
};

inline IonCapacity ion_capacity(double chain_length, double gap,
                                double rayleigh, int m_chains,
                                int ions_per_chain = 25) {
  if (!(chain_length > 0.0) || !(gap >= 0.0) || !(rayleigh > 0.0) ||
      m_chains < 1 || ions_per_chain < 1)
    throw config_error("ion_capacity: inputs out of range");
  IonCapacity c;
  c.total_extent = m_chains * chain_length + (m_chains - 1) * gap;
  c.fits = c.total_extent <= 2.0 * rayleigh;
  c.n_qubits = static_cast<long>(m_chains) * ions_per_chain;
  return c;
}

inline long rydberg_capacity(double spacing, double rayleigh, int rows,
                             double fill) {
  if (!(spacing > 0.0) || !(rayleigh > 0.0) || rows < 1 ||
      !(fill > 0.0 && fill <= 1.0))
    throw config_error("rydberg_capacity: inputs out of range");
  const double per_row = std::floor(2.0 * rayleigh / spacing);
  return static_cast<long>(std::floor(per_row * rows * fill));
}

} // namespace cavlink
