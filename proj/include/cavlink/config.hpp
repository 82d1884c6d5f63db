#pragma once

// Strict JSON configuration: {value, unit} frequency pairs, unknown-field
// rejection with path diagnostics, dotted-path --set overrides (with short
// aliases for the common physics knobs), and a canonical fully-defaulted
// echo for run manifests.  All frequencies canonicalize to rad/s.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cavlink/architecture.hpp"
#include "cavlink/chain.hpp"
#include "cavlink/constants.hpp"
#include "cavlink/errors.hpp"
#include "cavlink/herald.hpp"
#include "cavlink/transfer.hpp"

namespace cavlink {

using json = nlohmann::json;

namespace cfgdetail {

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline void check_keys(const json& j, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    throw config_error("config: '" + path + "' must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) { ok = true; break; }
    if (!ok)
      throw config_error("config: unknown field '" + join(path, key) + "'");
  }
}

inline double get_number(const json& j, const std::string& path,
                         const std::string& key) {
  if (!j.contains(key))
    throw config_error("config: missing field '" + join(path, key) + "'");
  const json& v = j.at(key);
  if (!v.is_number())
    throw config_error("config: '" + join(path, key) + "' must be a number");
  return v.get<double>();
}

inline double get_number_or(const json& j, const std::string& path,
                            const std::string& key, double def) {
  return j.contains(key) ? get_number(j, path, key) : def;
}

inline long get_integer(const json& j, const std::string& path,
                        const std::string& key) {
  if (!j.contains(key))
    throw config_error("config: missing field '" + join(path, key) + "'");
  const json& v = j.at(key);
  if (!v.is_number_integer())
    throw config_error("config: '" + join(path, key) + "' must be an integer");
  return v.get<long>();
}

inline long get_integer_or(const json& j, const std::string& path,
                           const std::string& key, long def) {
  return j.contains(key) ? get_integer(j, path, key) : def;
}

// Frequency field: {"value": x, "unit": "rad_per_s"|"Hz"|"MHz_times_2pi"}.
inline double parse_freq(const json& v, const std::string& where) {
  if (!v.is_object())
    throw config_error("config: '" + where +
                       "' must be a {value, unit} frequency pair");
  check_keys(v, where, {"value", "unit"});
  const double value = get_number(v, where, "value");
  if (!v.contains("unit"))
    throw config_error("config: missing field '" + where + ".unit'");
  const std::string unit = v.at("unit").get<std::string>();
  if (unit == "rad_per_s") return value;
  if (unit == "Hz") return hz_to_rad(value);
  if (unit == "MHz_times_2pi") return mhz_2pi(value);
  throw config_error("config: '" + where + ".unit' must be one of rad_per_s, "
                     "Hz, MHz_times_2pi (got '" + unit + "')");
}

inline double get_freq(const json& j, const std::string& path,
                       const std::string& key) {
  if (!j.contains(key))
    throw config_error("config: missing field '" + join(path, key) + "'");
  return parse_freq(j.at(key), join(path, key));
}

inline double get_freq_or(const json& j, const std::string& path,
                          const std::string& key, double def) {
  return j.contains(key) ? get_freq(j, path, key) : def;
}

inline json freq_json(double rad_per_s) {
  return json{{"value", rad_per_s}, {"unit", "rad_per_s"}};
}

inline void require_nonnegative_rate(double v, const std::string& where) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw config_error("config: '" + where + "' must be a finite rate >= 0");
}

inline void require_probability(double v, const std::string& where) {
  if (!(v >= 0.0 && v <= 1.0))
    throw config_error("config: '" + where + "' must lie in [0, 1]");
}

} // namespace cfgdetail

// ---------------------------------------------------------------------------
// Trajectory specification shared by the protocol and ion-chain blocks.
// The antinode coupling g0 comes from the cavity block at build time.

struct TrajectorySpec {
  CouplingTrajectory::Kind kind = CouplingTrajectory::Kind::constant;
  double wavelength = 0.0;
  std::vector<MotionTone> tones{};

  CouplingTrajectory build(double g0) const {
    switch (kind) {
      case CouplingTrajectory::Kind::constant:
        return CouplingTrajectory::constant(g0);
      case CouplingTrajectory::Kind::sinusoid:
        return CouplingTrajectory::sinusoid(g0, wavelength, tones.at(0));
      case CouplingTrajectory::Kind::mode_sum:
        return CouplingTrajectory::mode_sum(g0, wavelength, tones);
    }
    throw config_error("trajectory: unknown kind");
  }

  json to_json() const {
    json out;
    switch (kind) {
      case CouplingTrajectory::Kind::constant: out["kind"] = "constant"; break;
      case CouplingTrajectory::Kind::sinusoid: out["kind"] = "sinusoid"; break;
      case CouplingTrajectory::Kind::mode_sum: out["kind"] = "mode_sum"; break;
    }
    if (kind != CouplingTrajectory::Kind::constant) {
      out["wavelength"] = wavelength;
      if (kind == CouplingTrajectory::Kind::sinusoid) {
        out["amplitude"] = tones.at(0).amplitude;
        out["omega"] = cfgdetail::freq_json(tones.at(0).omega);
        out["phase"] = tones.at(0).phase;
      } else {
        json arr = json::array();
        for (const auto& t : tones)
          arr.push_back(json{{"amplitude", t.amplitude},
                             {"omega", cfgdetail::freq_json(t.omega)},
                             {"phase", t.phase}});
        out["tones"] = arr;
      }
    }
    return out;
  }
};

inline TrajectorySpec parse_trajectory(const json& j, const std::string& path) {
  using namespace cfgdetail;
  TrajectorySpec spec;
  if (!j.is_object() || !j.contains("kind"))
    throw config_error("config: '" + path + "' needs a 'kind' field");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    check_keys(j, path, {"kind"});
    spec.kind = CouplingTrajectory::Kind::constant;
  } else if (kind == "sinusoid") {
    check_keys(j, path, {"kind", "amplitude", "omega", "phase", "wavelength"});
    spec.kind = CouplingTrajectory::Kind::sinusoid;
    spec.wavelength = get_number(j, path, "wavelength");
    spec.tones.push_back({get_number(j, path, "amplitude"),
                          get_freq(j, path, "omega"),
                          get_number_or(j, path, "phase", 0.0)});
  } else if (kind == "mode_sum") {
    check_keys(j, path, {"kind", "wavelength", "tones"});
    spec.kind = CouplingTrajectory::Kind::mode_sum;
    spec.wavelength = get_number(j, path, "wavelength");
    if (!j.contains("tones") || !j.at("tones").is_array())
      throw config_error("config: '" + path + ".tones' must be an array");
    int i = 0;
    for (const auto& t : j.at("tones")) {
      const std::string tp = path + ".tones[" + std::to_string(i++) + "]";
      check_keys(t, tp, {"amplitude", "omega", "phase"});
      spec.tones.push_back({get_number(t, tp, "amplitude"),
                            get_freq(t, tp, "omega"),
                            get_number_or(t, tp, "phase", 0.0)});
    }
    if (spec.tones.empty())
      throw config_error("config: '" + path + ".tones' must be non-empty");
  } else {
    throw config_error("config: '" + path + ".kind' must be one of constant, "
                       "sinusoid, mode_sum (got '" + kind + "')");
  }
  return spec;
}

// ---------------------------------------------------------------------------

struct ThermalOptions {
  int n_modes = 5;
  int n_samples = 1000;
};

struct ProtocolOptions {
  double interpulse_gap = 0.0;
  double swap_error = 0.0;
  double interpulse_phase = 0.0;
};

struct ThroughputRange {
  int m_min = 2;
  int m_max = 40;
  int m_step = 2;
};

struct IonCapacityQuery {
  double chain_length = 88e-6;
  double gap = 30e-6;
  std::optional<double> rayleigh{}; // falls back to geometry block
  int m_chains = 20;
  int ions_per_chain = 25;
};

struct RydbergCapacityQuery {
  double spacing = 2.6e-6;
  std::optional<double> rayleigh{};
  int rows = 1;
  double fill = 0.25;
};

struct Config {
  std::optional<CavityAtomParams> cavity{};
  std::optional<PulseProfile> pulse{};
  std::optional<TrajectorySpec> traj_a{};
  std::optional<TrajectorySpec> traj_b{};
  IntegratorOptions integrator{};
  BranchingSpec branching{};
  ProtocolOptions protocol{};
  std::optional<ChainSpec> chain{};
  ThermalOptions thermal{};
  ArchitectureParams architecture{};
  PhotonicParams photonic{};
  ShuttlingParams shuttling{};
  ThroughputRange throughput{};
  std::optional<TimingBudget> timing{};
  std::optional<CavityGeometry> geometry{};
  std::optional<IonCapacityQuery> capacity_ion{};
  std::optional<RydbergCapacityQuery> capacity_rydberg{};
  std::optional<ScalingQuery> scaling{};
  std::optional<ErrorBudget> budget{};

  // Builds the transfer config (cavity + pulse blocks required).
  TransferConfig transfer_config() const {
    if (!cavity || !pulse)
      throw config_error("config: 'cavity' and 'pulse' blocks are required "
                         "for transfer simulations");
    TransferConfig cfg;
    cfg.cavity = *cavity;
    cfg.pulse = *pulse;
    cfg.integrator = integrator;
    if (traj_a) cfg.traj_a = traj_a->build(cavity->g_a);
    if (traj_b) cfg.traj_b = traj_b->build(cavity->g_b);
    cfg.validate();
    return cfg;
  }

  ProtocolConfig protocol_config() const {
    ProtocolConfig cfg;
    cfg.transfer = transfer_config();
    cfg.interpulse_gap = protocol.interpulse_gap;
    cfg.swap_error = protocol.swap_error;
    cfg.interpulse_phase = protocol.interpulse_phase;
    cfg.validate();
    return cfg;
  }

  json resolved() const;
};

inline Config parse_config(const json& root) {
  using namespace cfgdetail;
  Config c;
  check_keys(root, "",
             {"cavity", "pulse", "trajectory_a", "trajectory_b", "integrator",
              "branching", "protocol", "chain", "thermal", "architecture",
              "photonic", "shuttling", "throughput", "timing", "geometry",
              "capacity", "scaling", "budget"});

  if (root.contains("cavity")) {
    const json& j = root.at("cavity");
    check_keys(j, "cavity", {"g_a", "g_b", "kappa", "gamma", "delta"});
    CavityAtomParams p;
    p.g_a = get_freq(j, "cavity", "g_a");
    p.g_b = get_freq(j, "cavity", "g_b");
    p.kappa = get_freq(j, "cavity", "kappa");
    p.gamma = get_freq(j, "cavity", "gamma");
    p.delta = get_freq_or(j, "cavity", "delta", 0.0);
    require_nonnegative_rate(p.g_a, "cavity.g_a");
    require_nonnegative_rate(p.g_b, "cavity.g_b");
    require_nonnegative_rate(p.kappa, "cavity.kappa");
    require_nonnegative_rate(p.gamma, "cavity.gamma");
    p.validate();
    c.cavity = p;
  }

  if (root.contains("pulse")) {
    const json& j = root.at("pulse");
    check_keys(j, "pulse", {"omega0", "duration", "shape"});
    PulseProfile p;
    p.omega0 = get_freq(j, "pulse", "omega0");
    p.duration = get_number(j, "pulse", "duration");
    require_nonnegative_rate(p.omega0, "pulse.omega0");
    if (j.contains("shape")) {
      const json& s = j.at("shape");
      check_keys(s, "pulse.shape",
                 {"pump_center_fraction", "stokes_center_fraction",
                  "width_fraction"});
      p.shape.pump_center_fraction =
          get_number_or(s, "pulse.shape", "pump_center_fraction", 0.6);
      p.shape.stokes_center_fraction =
          get_number_or(s, "pulse.shape", "stokes_center_fraction", 0.4);
      p.shape.width_fraction =
          get_number_or(s, "pulse.shape", "width_fraction", 0.15);
    }
    p.validate();
    c.pulse = p;
  }

  if (root.contains("trajectory_a"))
    c.traj_a = parse_trajectory(root.at("trajectory_a"), "trajectory_a");
  if (root.contains("trajectory_b"))
    c.traj_b = parse_trajectory(root.at("trajectory_b"), "trajectory_b");

  if (root.contains("integrator")) {
    const json& j = root.at("integrator");
    check_keys(j, "integrator", {"rel_tol", "abs_tol", "max_step_fraction"});
    c.integrator.rel_tol = get_number_or(j, "integrator", "rel_tol", 1e-8);
    c.integrator.abs_tol = get_number_or(j, "integrator", "abs_tol", 1e-10);
    c.integrator.max_step_fraction =
        get_number_or(j, "integrator", "max_step_fraction", 1.0 / 200.0);
    c.integrator.validate();
  }

  if (root.contains("branching")) {
    const json& j = root.at("branching");
    check_keys(j, "branching", {"p_backscatter_branch"});
    c.branching.p_backscatter_branch = get_number_or(
        j, "branching", "p_backscatter_branch", c.branching.p_backscatter_branch);
    require_probability(c.branching.p_backscatter_branch,
                        "branching.p_backscatter_branch");
  }

  if (root.contains("protocol")) {
    const json& j = root.at("protocol");
    check_keys(j, "protocol",
               {"interpulse_gap", "swap_error", "interpulse_phase"});
    c.protocol.interpulse_gap = get_number_or(j, "protocol", "interpulse_gap", 0.0);
    c.protocol.swap_error = get_number_or(j, "protocol", "swap_error", 0.0);
    c.protocol.interpulse_phase =
        get_number_or(j, "protocol", "interpulse_phase", 0.0);
    require_nonnegative_rate(c.protocol.interpulse_gap, "protocol.interpulse_gap");
    require_probability(c.protocol.swap_error, "protocol.swap_error");
  }

  if (root.contains("chain")) {
    const json& j = root.at("chain");
    check_keys(j, "chain",
               {"masses_amu", "n_ions", "mass_amu", "omega_com", "temperature",
                "comm_index", "cavity_wavelength", "g0", "reference_mass_amu"});
    ChainSpec s;
    if (j.contains("masses_amu")) {
      if (j.contains("n_ions") || j.contains("mass_amu"))
        throw config_error(
            "config: 'chain' takes either masses_amu or n_ions+mass_amu");
      for (const auto& m : j.at("masses_amu"))
        s.masses.push_back(m.get<double>() * constants::atomic_mass);
    } else {
      const long n = get_integer_or(j, "chain", "n_ions", 25);
      const double m = get_number_or(j, "chain", "mass_amu", 137.0);
      s.masses.assign(static_cast<std::size_t>(n), m * constants::atomic_mass);
    }
    s.omega_com = get_freq(j, "chain", "omega_com");
    s.temperature = get_number_or(j, "chain", "temperature", 0.0);
    s.comm_index = static_cast<int>(
        get_integer_or(j, "chain", "comm_index",
                       static_cast<long>(s.masses.size()) / 2));
    s.cavity_wavelength =
        get_number_or(j, "chain", "cavity_wavelength", 455e-9);
    s.g0 = get_freq_or(j, "chain", "g0", 0.0);
    s.reference_mass =
        get_number_or(j, "chain", "reference_mass_amu", 0.0) *
        constants::atomic_mass;
    s.validate();
    c.chain = s;
  }

  if (root.contains("thermal")) {
    const json& j = root.at("thermal");
    check_keys(j, "thermal", {"n_modes", "n_samples"});
    c.thermal.n_modes = static_cast<int>(get_integer_or(j, "thermal", "n_modes", 5));
    c.thermal.n_samples =
        static_cast<int>(get_integer_or(j, "thermal", "n_samples", 1000));
    if (c.thermal.n_modes < 1)
      throw config_error("config: 'thermal.n_modes' must be >= 1");
    if (c.thermal.n_samples < 1)
      throw config_error("config: 'thermal.n_samples' must be >= 1");
  }

  if (root.contains("architecture")) {
    const json& j = root.at("architecture");
    check_keys(j, "architecture",
               {"tau_serial", "tau_parallel", "p_success", "ions_per_chain"});
    c.architecture.tau_serial =
        get_number_or(j, "architecture", "tau_serial", 5.3e-6);
    c.architecture.tau_parallel =
        get_number_or(j, "architecture", "tau_parallel", 28e-6);
    c.architecture.p_success =
        get_number_or(j, "architecture", "p_success", 0.40);
    c.architecture.ions_per_chain = static_cast<int>(
        get_integer_or(j, "architecture", "ions_per_chain", 25));
    require_probability(c.architecture.p_success, "architecture.p_success");
    c.architecture.validate();
  }

  if (root.contains("photonic")) {
    const json& j = root.at("photonic");
    check_keys(j, "photonic",
               {"two_ion_time", "purification_factor",
                "insertion_loss_db_per_photon", "photons_per_attempt",
                "switch_overhead"});
    c.photonic.two_ion_time = get_number_or(j, "photonic", "two_ion_time", 5e-3);
    c.photonic.purification_factor =
        get_number_or(j, "photonic", "purification_factor", 2.0);
    c.photonic.insertion_loss_db_per_photon =
        get_number_or(j, "photonic", "insertion_loss_db_per_photon", 1.3);
    c.photonic.photons_per_attempt = static_cast<int>(
        get_integer_or(j, "photonic", "photons_per_attempt", 2));
    c.photonic.switch_overhead =
        get_number_or(j, "photonic", "switch_overhead", 10e-3);
    c.photonic.validate();
  }

  if (root.contains("shuttling")) {
    const json& j = root.at("shuttling");
    check_keys(j, "shuttling", {"per_op_time"});
    c.shuttling.per_op_time = get_number_or(j, "shuttling", "per_op_time", 1e-3);
    c.shuttling.validate();
  }

  if (root.contains("throughput")) {
    const json& j = root.at("throughput");
    check_keys(j, "throughput", {"m_min", "m_max", "m_step"});
    c.throughput.m_min = static_cast<int>(get_integer_or(j, "throughput", "m_min", 2));
    c.throughput.m_max = static_cast<int>(get_integer_or(j, "throughput", "m_max", 40));
    c.throughput.m_step = static_cast<int>(get_integer_or(j, "throughput", "m_step", 2));
    if (c.throughput.m_min < 0 || c.throughput.m_max < c.throughput.m_min ||
        c.throughput.m_step < 1)
      throw config_error("config: invalid 'throughput' M range");
  }

  if (root.contains("timing")) {
    const json& j = root.at("timing");
    check_keys(j, "timing",
               {"transfer_time", "raman_rabi", "n_transfers", "n_rotations"});
    TimingBudget b;
    b.transfer_time = get_number_or(j, "timing", "transfer_time", 1.0e-6);
    b.raman_rabi = get_freq(j, "timing", "raman_rabi");
    b.n_transfers = static_cast<int>(get_integer_or(j, "timing", "n_transfers", 2));
    b.n_rotations = static_cast<int>(get_integer_or(j, "timing", "n_rotations", 4));
    b.validate();
    c.timing = b;
  }

  if (root.contains("geometry")) {
    const json& j = root.at("geometry");
    check_keys(j, "geometry", {"length", "finesse", "waist", "wavelength"});
    CavityGeometry g;
    g.length = get_number(j, "geometry", "length");
    g.finesse = get_number(j, "geometry", "finesse");
    g.waist = get_number(j, "geometry", "waist");
    g.wavelength = get_number(j, "geometry", "wavelength");
    g.validate();
    c.geometry = g;
  }

  if (root.contains("capacity")) {
    const json& j = root.at("capacity");
    check_keys(j, "capacity", {"ion", "rydberg"});
    if (j.contains("ion")) {
      const json& ji = j.at("ion");
      check_keys(ji, "capacity.ion",
                 {"chain_length", "gap", "rayleigh", "m_chains",
                  "ions_per_chain"});
      IonCapacityQuery q;
      q.chain_length = get_number_or(ji, "capacity.ion", "chain_length", 88e-6);
      q.gap = get_number_or(ji, "capacity.ion", "gap", 30e-6);
      if (ji.contains("rayleigh"))
        q.rayleigh = get_number(ji, "capacity.ion", "rayleigh");
      q.m_chains = static_cast<int>(
          get_integer_or(ji, "capacity.ion", "m_chains", 20));
      q.ions_per_chain = static_cast<int>(
          get_integer_or(ji, "capacity.ion", "ions_per_chain", 25));
      c.capacity_ion = q;
    }
    if (j.contains("rydberg")) {
      const json& jr = j.at("rydberg");
      check_keys(jr, "capacity.rydberg", {"spacing", "rayleigh", "rows", "fill"});
      RydbergCapacityQuery q;
      q.spacing = get_number_or(jr, "capacity.rydberg", "spacing", 2.6e-6);
      if (jr.contains("rayleigh"))
        q.rayleigh = get_number(jr, "capacity.rydberg", "rayleigh");
      q.rows = static_cast<int>(get_integer_or(jr, "capacity.rydberg", "rows", 1));
      q.fill = get_number_or(jr, "capacity.rydberg", "fill", 0.25);
      c.capacity_rydberg = q;
    }
  }

  if (root.contains("scaling")) {
    const json& j = root.at("scaling");
    check_keys(j, "scaling",
               {"n_qubits", "dimension", "n_parallel", "gate_time",
                "qubit_lifetime", "eps_r"});
    ScalingQuery q;
    q.n_qubits = get_integer_or(j, "scaling", "n_qubits", 0);
    if (j.contains("dimension")) {
      const json& d = j.at("dimension");
      if (d.is_string() && d.get<std::string>() == "inf")
        q.dimension = INFINITY;
      else if (d.is_number())
        q.dimension = d.get<double>();
      else
        throw config_error(
            "config: 'scaling.dimension' must be a number or \"inf\"");
    }
    q.n_parallel = get_number_or(j, "scaling", "n_parallel", 1.0);
    q.gate_time = get_number_or(j, "scaling", "gate_time", 0.0);
    q.qubit_lifetime = get_number_or(j, "scaling", "qubit_lifetime", 0.0);
    q.eps_r = get_number_or(j, "scaling", "eps_r", 0.0);
    q.validate();
    c.scaling = q;
  }

  if (root.contains("budget")) {
    const json& j = root.at("budget");
    check_keys(j, "budget", {"eps_local", "eps_m", "eps_bell"});
    ErrorBudget b;
    b.eps_local = get_number_or(j, "budget", "eps_local", 0.0);
    b.eps_m = get_number_or(j, "budget", "eps_m", 0.0);
    b.eps_bell = get_number_or(j, "budget", "eps_bell", 0.0);
    b.validate();
    c.budget = b;
  }

  return c;
}

inline json Config::resolved() const {
  using cfgdetail::freq_json;
  json out;
  if (cavity) {
    out["cavity"] = {{"g_a", freq_json(cavity->g_a)},
                     {"g_b", freq_json(cavity->g_b)},
                     {"kappa", freq_json(cavity->kappa)},
                     {"gamma", freq_json(cavity->gamma)},
                     {"delta", freq_json(cavity->delta)}};
  }
  if (pulse) {
    out["pulse"] = {
        {"omega0", freq_json(pulse->omega0)},
        {"duration", pulse->duration},
        {"shape",
         {{"pump_center_fraction", pulse->shape.pump_center_fraction},
          {"stokes_center_fraction", pulse->shape.stokes_center_fraction},
          {"width_fraction", pulse->shape.width_fraction}}}};
  }
  if (traj_a) out["trajectory_a"] = traj_a->to_json();
  if (traj_b) out["trajectory_b"] = traj_b->to_json();
  out["integrator"] = {{"rel_tol", integrator.rel_tol},
                       {"abs_tol", integrator.abs_tol},
                       {"max_step_fraction", integrator.max_step_fraction}};
  out["branching"] = {{"p_backscatter_branch", branching.p_backscatter_branch}};
  out["protocol"] = {{"interpulse_gap", protocol.interpulse_gap},
                     {"swap_error", protocol.swap_error},
                     {"interpulse_phase", protocol.interpulse_phase}};
  if (chain) {
    json masses = json::array();
    for (double m : chain->masses) masses.push_back(m / constants::atomic_mass);
    out["chain"] = {{"masses_amu", masses},
                    {"omega_com", freq_json(chain->omega_com)},
                    {"temperature", chain->temperature},
                    {"comm_index", chain->comm_index},
                    {"cavity_wavelength", chain->cavity_wavelength},
                    {"g0", freq_json(chain->g0)},
                    {"reference_mass_amu",
                     chain->ref_mass() / constants::atomic_mass}};
  }
  out["thermal"] = {{"n_modes", thermal.n_modes},
                    {"n_samples", thermal.n_samples}};
  out["architecture"] = {{"tau_serial", architecture.tau_serial},
                         {"tau_parallel", architecture.tau_parallel},
                         {"p_success", architecture.p_success},
                         {"ions_per_chain", architecture.ions_per_chain}};
  out["photonic"] = {
      {"two_ion_time", photonic.two_ion_time},
      {"purification_factor", photonic.purification_factor},
      {"insertion_loss_db_per_photon", photonic.insertion_loss_db_per_photon},
      {"photons_per_attempt", photonic.photons_per_attempt},
      {"switch_overhead", photonic.switch_overhead}};
  out["shuttling"] = {{"per_op_time", shuttling.per_op_time}};
  out["throughput"] = {{"m_min", throughput.m_min},
                       {"m_max", throughput.m_max},
                       {"m_step", throughput.m_step}};
  if (timing) {
    out["timing"] = {{"transfer_time", timing->transfer_time},
                     {"raman_rabi", freq_json(timing->raman_rabi)},
                     {"n_transfers", timing->n_transfers},
                     {"n_rotations", timing->n_rotations}};
  }
  if (geometry) {
    out["geometry"] = {{"length", geometry->length},
                       {"finesse", geometry->finesse},
                       {"waist", geometry->waist},
                       {"wavelength", geometry->wavelength}};
  }
  if (capacity_ion || capacity_rydberg) {
    json cap;
    if (capacity_ion) {
      cap["ion"] = {{"chain_length", capacity_ion->chain_length},
                    {"gap", capacity_ion->gap},
                    {"m_chains", capacity_ion->m_chains},
                    {"ions_per_chain", capacity_ion->ions_per_chain}};
      if (capacity_ion->rayleigh) cap["ion"]["rayleigh"] = *capacity_ion->rayleigh;
    }
    if (capacity_rydberg) {
      cap["rydberg"] = {{"spacing", capacity_rydberg->spacing},
                        {"rows", capacity_rydberg->rows},
                        {"fill", capacity_rydberg->fill}};
      if (capacity_rydberg->rayleigh)
        cap["rydberg"]["rayleigh"] = *capacity_rydberg->rayleigh;
    }
    out["capacity"] = cap;
  }
  if (scaling) {
    json s = {{"n_qubits", scaling->n_qubits},
              {"n_parallel", scaling->n_parallel},
              {"gate_time", scaling->gate_time},
              {"qubit_lifetime", scaling->qubit_lifetime},
              {"eps_r", scaling->eps_r}};
    if (std::isinf(scaling->dimension))
      s["dimension"] = "inf";
    else
      s["dimension"] = scaling->dimension;
    out["scaling"] = s;
  }
  if (budget) {
    out["budget"] = {{"eps_local", budget->eps_local},
                     {"eps_m", budget->eps_m},
                     {"eps_bell", budget->eps_bell}};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dotted-path --set overrides.  Short aliases cover the common knobs; a bare
// number assigned to a {value, unit} node replaces it with rad_per_s.

inline std::string resolve_set_alias(const std::string& key) {
  static const std::pair<const char*, const char*> aliases[] = {
      {"omega0", "pulse.omega0"},
      {"duration", "pulse.duration"},
      {"g_a", "cavity.g_a"},
      {"g_b", "cavity.g_b"},
      {"kappa", "cavity.kappa"},
      {"gamma", "cavity.gamma"},
      {"delta", "cavity.delta"},
      {"temperature", "chain.temperature"},
      {"omega_com", "chain.omega_com"},
      {"n_modes", "thermal.n_modes"},
      {"n_samples", "thermal.n_samples"},
      {"interpulse_gap", "protocol.interpulse_gap"},
      {"swap_error", "protocol.swap_error"},
      {"interpulse_phase", "protocol.interpulse_phase"},
  };
  for (const auto& [from, to] : aliases)
    if (key == from) return to;
  return key;
}

inline void apply_override(json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw config_error("--set expects KEY=VALUE (got '" + assignment + "')");
  const std::string path = resolve_set_alias(assignment.substr(0, eq));
  const std::string raw = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw; // plain string
  }

  json* node = &root;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot - pos);
    if (key.empty())
      throw config_error("--set: empty path segment in '" + path + "'");
    if (dot == std::string::npos) {
      const bool freq_node = node->contains(key) &&
                             (*node)[key].is_object() &&
                             (*node)[key].contains("unit");
      if (freq_node && value.is_number())
        (*node)[key] = json{{"value", value}, {"unit", "rad_per_s"}};
      else
        (*node)[key] = value;
      return;
    }
    if (!node->contains(key)) (*node)[key] = json::object();
    node = &(*node)[key];
    if (!node->is_object())
      throw config_error("--set: '" + path + "' descends into a non-object");
    pos = dot + 1;
  }
}

} // namespace cavlink
