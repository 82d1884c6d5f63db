// cavlink: cavity-mediated entanglement-link analysis toolkit.
//
// Subcommands: transfer, landscape, optimize, protocol, thermal, modes,
// throughput, capacity, scaling.  Conventions: all frequencies/rates are
// angular (rad/s) unless a config field's {value, unit} pair says otherwise;
// times are seconds, lengths meters.  Exit codes: 0 success, 2 configuration,
// 3 numeric, 4 I/O.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavlink/config.hpp"
#include "cavlink/io.hpp"
#include "cavlink/version.hpp"

namespace {

using cavlink::json;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format = "json";
};

void add_common(CLI::App* sub, CommonOpts& c) {
  sub->add_option("--config", c.config_path,
                  "JSON configuration file (frequencies as {value, unit} "
                  "pairs; unit in {rad_per_s, Hz, MHz_times_2pi})");
  sub->add_option("--set", c.sets,
                  "Override KEY=VALUE (dotted path into the config JSON; "
                  "bare numbers on frequency fields are rad/s)");
  sub->add_option("--seed", c.seed, "RNG seed (required for thermal)");
  sub->add_option("--out", c.out_path,
                  "Output file (default: stdout; CSV outputs get a "
                  "<out>.manifest.json sidecar)");
  sub->add_option("--format", c.format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

cavlink::Config load_config(const CommonOpts& c, json* raw_out = nullptr) {
  json root = json::object();
  if (!c.config_path.empty()) {
    const std::string text = cavlink::read_text(c.config_path);
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw cavlink::config_error(std::string("config parse error: ") + e.what());
    }
  }
  for (const auto& s : c.sets) cavlink::apply_override(root, s);
  if (raw_out) *raw_out = root;
  return cavlink::parse_config(root);
}

json make_manifest(const std::string& subcommand, const cavlink::Config& cfg,
                   const CommonOpts& c, const std::vector<std::string>& outputs) {
  json m = {{"subcommand", subcommand},
            {"version", CAVLINK_VERSION},
            {"config", cfg.resolved()},
            {"outputs", outputs}};
  if (c.seed) m["seed"] = *c.seed;
  return m;
}

// Scalar-result commands: JSON {result, manifest} or flat CSV.
void emit_scalar(const std::string& subcommand, const cavlink::Config& cfg,
                 const CommonOpts& c, const json& result) {
  std::vector<std::string> outputs;
  if (!c.out_path.empty()) outputs.push_back(c.out_path);
  const json manifest = make_manifest(subcommand, cfg, c, outputs);
  std::string text;
  if (c.format == "csv") {
    text = cavlink::scalar_csv(result);
    if (!c.out_path.empty()) {
      cavlink::write_text(c.out_path, text);
      cavlink::write_text(c.out_path + ".manifest.json", manifest.dump(2) + "\n");
    } else {
      std::cout << text;
      std::cerr << manifest.dump(2) << "\n";
    }
  } else {
    const json doc = {{"result", result}, {"manifest", manifest}};
    text = doc.dump(2) + "\n";
    if (!c.out_path.empty())
      cavlink::write_text(c.out_path, text);
    else
      std::cout << text;
  }
}

// Table commands: CSV body with manifest sidecar, or a JSON document.
void emit_table(const std::string& subcommand, const cavlink::Config& cfg,
                const CommonOpts& c, const std::string& csv,
                const json& json_rows, const json& extra = json::object()) {
  std::vector<std::string> outputs;
  if (!c.out_path.empty()) outputs.push_back(c.out_path);
  json manifest = make_manifest(subcommand, cfg, c, outputs);
  for (const auto& [k, v] : extra.items()) manifest[k] = v;
  if (c.format == "csv") {
    if (!c.out_path.empty()) {
      cavlink::write_text(c.out_path, csv);
      cavlink::write_text(c.out_path + ".manifest.json", manifest.dump(2) + "\n");
    } else {
      std::cout << csv;
      std::cerr << manifest.dump(2) << "\n";
    }
  } else {
    const json doc = {{"result", json_rows}, {"manifest", manifest}};
    if (!c.out_path.empty())
      cavlink::write_text(c.out_path, doc.dump(2) + "\n");
    else
      std::cout << doc.dump(2) << "\n";
  }
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw cavlink::config_error("grid needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

// ---------------------------------------------------------------------------

int run_transfer(const CommonOpts& c) {
  const cavlink::Config cfg = load_config(c);
  const cavlink::TransferConfig tc = cfg.transfer_config();
  const cavlink::TransferResult r = cavlink::evolve_transfer(tc);
  json result = cavlink::to_json(r);
  result["cooperativity"] = cavlink::cooperativity(tc.cavity);
  const auto bs = cavlink::backscatter_error(r, cfg.branching);
  result["backscatter"] = {{"per_attempt", bs.per_attempt},
                           {"per_heralded_pair",
                            bs.per_heralded_pair ? json(*bs.per_heralded_pair)
                                                 : json(nullptr)}};
  emit_scalar("transfer", cfg, c, result);
  return 0;
}

struct LandscapeOpts {
  double omega0_min = 0.0, omega0_max = 0.0;
  int omega0_points = 0;
  double duration_min = 0.0, duration_max = 0.0;
  int duration_points = 0;
};

int run_landscape(const CommonOpts& c, const LandscapeOpts& l) {
  const cavlink::Config cfg = load_config(c);
  const cavlink::TransferConfig base = cfg.transfer_config();
  const auto omega0s = linspace(l.omega0_min, l.omega0_max, l.omega0_points);
  const auto durations = linspace(l.duration_min, l.duration_max, l.duration_points);
  const auto cells = cavlink::scan_landscape(base, omega0s, durations);

  const cavlink::LandscapeCell* argmax = nullptr;
  int n_failed = 0;
  for (const auto& cell : cells) {
    if (!cell.ok()) {
      ++n_failed;
      continue;
    }
    if (!argmax || cell.result->p_success > argmax->result->p_success)
      argmax = &cell;
  }
  json summary = {{"n_cells", cells.size()}, {"n_failed", n_failed}};
  if (argmax)
    summary["argmax"] = {{"omega0_rad_s", argmax->omega0},
                         {"duration_s", argmax->duration},
                         {"p_success", argmax->result->p_success}};

  const std::string csv = cavlink::landscape_csv(cells);
  json rows = json::array();
  for (const auto& cell : cells) {
    json row = {{"omega0_rad_s", cell.omega0}, {"duration_s", cell.duration}};
    if (cell.ok())
      row["result"] = cavlink::to_json(*cell.result);
    else
      row["error"] = cell.error;
    rows.push_back(row);
  }

  // CSV body plus a summary JSON naming the argmax cell.
  std::vector<std::string> outputs;
  if (!c.out_path.empty()) outputs.push_back(c.out_path);
  json manifest = make_manifest("landscape", cfg, c, outputs);
  manifest["summary"] = summary;
  if (c.format == "csv") {
    if (!c.out_path.empty()) {
      cavlink::write_text(c.out_path, csv);
      cavlink::write_text(c.out_path + ".summary.json", summary.dump(2) + "\n");
      cavlink::write_text(c.out_path + ".manifest.json", manifest.dump(2) + "\n");
    } else {
      std::cout << csv;
      std::cerr << manifest.dump(2) << "\n";
    }
  } else {
    const json doc = {{"result", {{"cells", rows}, {"summary", summary}}},
                      {"manifest", manifest}};
    if (!c.out_path.empty())
      cavlink::write_text(c.out_path, doc.dump(2) + "\n");
    else
      std::cout << doc.dump(2) << "\n";
  }
  return 0;
}

int run_optimize(const CommonOpts& c, double lo, double hi) {
  const cavlink::Config cfg = load_config(c);
  const cavlink::TransferConfig base = cfg.transfer_config();
  const auto r = cavlink::optimize_omega0(base, lo, hi);
  emit_scalar("optimize", cfg, c,
              json{{"omega0_star", r.omega0_star},
                   {"p_star", r.p_star},
                   {"evaluations", r.evaluations}});
  return 0;
}

int run_protocol(const CommonOpts& c) {
  const cavlink::Config cfg = load_config(c);
  const cavlink::BellOutcome out = cavlink::full_protocol_sim(cfg.protocol_config());
  json result = cavlink::to_json(out);
  result["interpulse_gap"] = cfg.protocol.interpulse_gap;
  result["swap_error"] = cfg.protocol.swap_error;
  emit_scalar("protocol", cfg, c, result);
  return 0;
}

int run_thermal(const CommonOpts& c, std::optional<int> samples,
                std::optional<int> modes) {
  if (!c.seed)
    throw cavlink::config_error("thermal: --seed is required (no wall-clock "
                                "default; runs must be reproducible)");
  const cavlink::Config cfg = load_config(c);
  if (!cfg.chain)
    throw cavlink::config_error("thermal: config needs a 'chain' block");
  cavlink::ChainSpec spec = *cfg.chain;
  if (spec.g0 <= 0.0 && cfg.cavity) spec.g0 = cfg.cavity->g_a;
  const int n_samples = samples.value_or(cfg.thermal.n_samples);
  const int n_modes = modes.value_or(cfg.thermal.n_modes);
  const auto r = cavlink::thermal_infidelity_mc(spec, cfg.protocol_config(),
                                                n_modes, n_samples, *c.seed);
  emit_scalar("thermal", cfg, c, cavlink::to_json(r));
  return 0;
}

int run_modes(const CommonOpts& c) {
  const cavlink::Config cfg = load_config(c);
  if (!cfg.chain)
    throw cavlink::config_error("modes: config needs a 'chain' block");
  const cavlink::ChainSpec& spec = *cfg.chain;
  const auto md = cavlink::normal_modes(spec);

  const std::string csv = cavlink::modes_csv(md, spec.comm_index);
  json freqs = json::array(), parts = json::array(), pos = json::array();
  for (int p = 0; p < md.freqs.size(); ++p) {
    freqs.push_back(md.freqs[p]);
    parts.push_back(md.vecs(spec.comm_index, p));
  }
  for (int i = 0; i < md.u.size(); ++i) pos.push_back(md.u[i] * md.ell);
  json rows = {{"ell_m", md.ell},
               {"frequencies_rad_s", freqs},
               {"participation_of_comm_ion", parts},
               {"positions_m", pos},
               {"com_spread_m", cavlink::com_spread(spec)}};
  emit_table("modes", cfg, c, csv, rows);
  return 0;
}

int run_throughput(const CommonOpts& c, std::optional<int> m_min,
                   std::optional<int> m_max, std::optional<int> m_step) {
  const cavlink::Config cfg = load_config(c);
  const int lo = m_min.value_or(cfg.throughput.m_min);
  const int hi = m_max.value_or(cfg.throughput.m_max);
  const int step = m_step.value_or(cfg.throughput.m_step);
  if (lo < 0 || hi < lo || step < 1)
    throw cavlink::config_error("throughput: invalid M range");
  std::vector<int> ms;
  for (int m = lo; m <= hi; m += step) ms.push_back(m);
  const auto rows =
      cavlink::rate_curves(cfg.architecture, cfg.photonic, cfg.shuttling, ms);
  const std::string csv = cavlink::rate_curves_csv(rows);
  json jrows = json::array();
  for (const auto& r : rows)
    jrows.push_back({{"M", r.m},
                     {"N", r.n},
                     {"t_cavity_s", r.t_cavity},
                     {"t_photonic_bare_s", r.t_photonic_bare},
                     {"t_photonic_over_s", r.t_photonic_over},
                     {"t_shuttling_s", r.t_shuttling},
                     {"beyond_single_cavity", r.beyond_single_cavity}});
  emit_table("throughput", cfg, c, csv, jrows);
  return 0;
}

int run_capacity(const CommonOpts& c) {
  const cavlink::Config cfg = load_config(c);
  json result;
  std::optional<double> rayleigh;
  if (cfg.geometry) {
    const auto d = cavlink::derived_cavity(*cfg.geometry);
    rayleigh = d.rayleigh;
    result["derived_cavity"] = {{"fsr_rad_s", d.fsr},
                                {"kappa_rad_s", d.kappa},
                                {"ringdown_s", d.ringdown},
                                {"rayleigh_m", d.rayleigh}};
  }
  if (cfg.capacity_ion) {
    const auto& q = *cfg.capacity_ion;
    const double zr = q.rayleigh ? *q.rayleigh : rayleigh.value_or(0.0);
    if (!(zr > 0.0))
      throw cavlink::config_error(
          "capacity.ion: need 'rayleigh' or a 'geometry' block");
    const auto ic = cavlink::ion_capacity(q.chain_length, q.gap, zr,
                                          q.m_chains, q.ions_per_chain);
    result["ion"] = {{"total_extent_m", ic.total_extent},
                     {"fits", ic.fits},
                     {"n_qubits", ic.n_qubits}};
  }
  if (cfg.capacity_rydberg) {
    const auto& q = *cfg.capacity_rydberg;
    const double zr = q.rayleigh ? *q.rayleigh : rayleigh.value_or(0.0);
    if (!(zr > 0.0))
      throw cavlink::config_error(
          "capacity.rydberg: need 'rayleigh' or a 'geometry' block");
    result["rydberg"] = {
        {"n_qubits", cavlink::rydberg_capacity(q.spacing, zr, q.rows, q.fill)}};
  }
  if (result.empty())
    throw cavlink::config_error(
        "capacity: config needs 'geometry' and/or 'capacity' blocks");
  emit_scalar("capacity", cfg, c, result);
  return 0;
}

struct ScalingOpts {
  std::optional<long> n;
  std::optional<std::string> dimension;
  std::optional<double> parallel;
  std::optional<int> swap_distance;
};

int run_scaling(const CommonOpts& c, const ScalingOpts& s) {
  const cavlink::Config cfg = load_config(c);
  cavlink::ScalingQuery q = cfg.scaling.value_or(cavlink::ScalingQuery{});
  if (s.n) q.n_qubits = *s.n;
  if (s.dimension) {
    if (*s.dimension == "inf")
      q.dimension = INFINITY;
    else
      q.dimension = std::stod(*s.dimension);
  }
  if (s.parallel) q.n_parallel = *s.parallel;
  q.validate();

  json result = {{"relative_time", cavlink::nonlocal_time_scaling(q)}};
  if (q.qubit_lifetime > 0.0)
    result["storage_error"] = cavlink::storage_error(q);
  if (s.swap_distance) {
    result["swap_gate_error"] = cavlink::swap_gate_error(*s.swap_distance, q.eps_r);
    result["teleported_error"] = 2.0 * q.eps_r;
  }
  emit_scalar("scaling", cfg, c, result);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cavlink " CAVLINK_VERSION
      " - heralded entanglement link analysis.\n"
      "Units: angular frequencies in rad/s (config files may use {value, "
      "unit}\nwith Hz or MHz_times_2pi), times in seconds, lengths in "
      "meters.\nExit codes: 0 ok, 2 config, 3 numeric, 4 I/O."};
  app.require_subcommand(1);

  CommonOpts common;
  LandscapeOpts lands;
  double opt_lo = 0.0, opt_hi = 0.0;
  std::optional<int> th_samples, th_modes;
  std::optional<int> tp_min, tp_max, tp_step;
  ScalingOpts scal;

  auto* transfer = app.add_subcommand(
      "transfer", "Single photon transfer: success probability + loss ledger");
  add_common(transfer, common);

  auto* landscape = app.add_subcommand(
      "landscape", "Success-probability landscape over (omega0, duration)");
  add_common(landscape, common);
  landscape->add_option("--omega0-min", lands.omega0_min, "rad/s")->required();
  landscape->add_option("--omega0-max", lands.omega0_max, "rad/s")->required();
  landscape->add_option("--omega0-points", lands.omega0_points, "grid points")
      ->required();
  landscape->add_option("--duration-min", lands.duration_min, "seconds")
      ->required();
  landscape->add_option("--duration-max", lands.duration_max, "seconds")
      ->required();
  landscape
      ->add_option("--duration-points", lands.duration_points, "grid points")
      ->required();

  auto* optimize = app.add_subcommand(
      "optimize", "Maximize p_success over omega0 at fixed duration");
  add_common(optimize, common);
  optimize->add_option("--omega-lo", opt_lo, "bracket low edge, rad/s")
      ->required();
  optimize->add_option("--omega-hi", opt_hi, "bracket high edge, rad/s")
      ->required();

  auto* protocol = app.add_subcommand(
      "protocol", "Two-transfer heralded Bell protocol (fidelity, p_herald)");
  add_common(protocol, common);

  auto* thermal = app.add_subcommand(
      "thermal", "Monte Carlo Bell infidelity from thermal ion motion");
  add_common(thermal, common);
  thermal->add_option("--samples", th_samples, "Monte Carlo samples");
  thermal->add_option("--modes", th_modes, "lowest axial modes to populate");

  auto* modes = app.add_subcommand(
      "modes", "Ion-chain normal modes (CSV: index, frequency, participation)");
  add_common(modes, common);

  auto* throughput = app.add_subcommand(
      "throughput", "Entanglement distribution time vs competing modalities");
  add_common(throughput, common);
  throughput->add_option("--m-min", tp_min, "first chain count M");
  throughput->add_option("--m-max", tp_max, "last chain count M");
  throughput->add_option("--m-step", tp_step, "M increment");

  auto* capacity = app.add_subcommand(
      "capacity", "Cavity geometry derivations and qubit capacity packing");
  add_common(capacity, common);

  auto* scaling = app.add_subcommand(
      "scaling", "Nonlocal gate time scaling, storage and swap-chain errors");
  add_common(scaling, common);
  scaling->add_option("--n", scal.n, "qubit count N");
  scaling->add_option("--dimension", scal.dimension,
                      "connectivity dimension D (number or 'inf')");
  scaling->add_option("--parallel", scal.parallel, "parallel links N*");
  scaling->add_option("--swap-distance", scal.swap_distance,
                      "site distance d for the swap-chain comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (transfer->parsed()) return run_transfer(common);
    if (landscape->parsed()) return run_landscape(common, lands);
    if (optimize->parsed()) return run_optimize(common, opt_lo, opt_hi);
    if (protocol->parsed()) return run_protocol(common);
    if (thermal->parsed()) return run_thermal(common, th_samples, th_modes);
    if (modes->parsed()) return run_modes(common);
    if (throughput->parsed())
      return run_throughput(common, tp_min, tp_max, tp_step);
    if (capacity->parsed()) return run_capacity(common);
    if (scaling->parsed()) return run_scaling(common, scal);
  } catch (const cavlink::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cavlink::io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const cavlink::boundary_error& e) {
    std::cerr << "numeric error: " << e.what() << " (omega0=" << e.omega0
              << " rad/s, p=" << e.p << ")\n";
    return 3;
  } catch (const cavlink::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
