#pragma once

// Deterministic result emission: shortest round-trip doubles, the CSV table
// formats pinned by the external interfaces, and JSON views of results.

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cavlink/architecture.hpp"
#include "cavlink/chain.hpp"
#include "cavlink/errors.hpp"
#include "cavlink/herald.hpp"
#include "cavlink/transfer.hpp"

namespace cavlink {

inline std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// CSV tables (headers pinned by the module interfaces).

inline std::string landscape_csv(const std::vector<LandscapeCell>& cells) {
  std::ostringstream out;
  out << "omega0_rad_s,duration_s,p_success,p_cavity,p_scatter_a,"
         "p_scatter_b,p_leftover\n";
  for (const auto& c : cells) {
    out << fmt_double(c.omega0) << ',' << fmt_double(c.duration) << ',';
    if (c.ok()) {
      const TransferResult& r = *c.result;
      out << fmt_double(r.p_success) << ',' << fmt_double(r.p_cavity_loss)
          << ',' << fmt_double(r.p_scatter_a) << ','
          << fmt_double(r.p_scatter_b) << ',' << fmt_double(r.p_leftover);
    } else {
      out << "nan,nan,nan,nan,nan";
    }
    out << '\n';
  }
  return out.str();
}

inline std::string modes_csv(const ModeDecomposition& md, int comm_index) {
  std::ostringstream out;
  out << "index,frequency_rad_s,participation_of_comm_ion\n";
  for (int p = 0; p < md.freqs.size(); ++p)
    out << p << ',' << fmt_double(md.freqs[p]) << ','
        << fmt_double(md.vecs(comm_index, p)) << '\n';
  return out.str();
}

inline std::string rate_curves_csv(const std::vector<RateCurveRow>& rows) {
  std::ostringstream out;
  out << "M,N,t_cavity_s,t_photonic_bare_s,t_photonic_over_s,t_shuttling_s,"
         "beyond_single_cavity\n";
  for (const auto& r : rows)
    out << r.m << ',' << r.n << ',' << fmt_double(r.t_cavity) << ','
        << fmt_double(r.t_photonic_bare) << ',' << fmt_double(r.t_photonic_over)
        << ',' << fmt_double(r.t_shuttling) << ','
        << (r.beyond_single_cavity ? "true" : "false") << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// JSON views.

inline nlohmann::json to_json(const TransferResult& r) {
  return {{"alpha", {{"re", r.alpha.real()}, {"im", r.alpha.imag()}}},
          {"p_success", r.p_success},
          {"p_cavity_loss", r.p_cavity_loss},
          {"p_scatter_a", r.p_scatter_a},
          {"p_scatter_b", r.p_scatter_b},
          {"p_leftover", r.p_leftover},
          {"conservation_defect", r.conservation_defect()}};
}

inline nlohmann::json to_json(const BellOutcome& o) {
  nlohmann::json j = {{"p_herald", o.p_herald},
                      {"relative_phase", o.relative_phase}};
  if (o.fidelity)
    j["fidelity"] = *o.fidelity;
  else
    j["fidelity"] = nullptr;
  return j;
}

inline nlohmann::json to_json(const ThermalMcResult& r) {
  return {{"mean_infidelity", r.mean_infidelity},
          {"std_error", r.std_error},
          {"mean_p_herald", r.mean_p_herald},
          {"n_samples", r.n_samples},
          {"n_failed", r.n_failed},
          {"seed", r.seed}};
}

// Flat key,value CSV for scalar results.
inline std::string scalar_csv(const nlohmann::json& j,
                              const std::string& prefix = "") {
  std::ostringstream out;
  if (prefix.empty()) out << "key,value\n";
  for (const auto& [key, v] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (v.is_object()) {
      out << scalar_csv(v, name);
    } else if (v.is_array()) {
      continue; // arrays belong to the json view
    } else if (v.is_number_float()) {
      out << name << ',' << fmt_double(v.get<double>()) << '\n';
    } else {
      out << name << ',' << v.dump() << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// File plumbing.

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw io_error("write failed for '" + path + "'");
}

inline std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) throw io_error("read failed for '" + path + "'");
  return ss.str();
}

} // namespace cavlink
