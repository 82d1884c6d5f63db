#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string preset(const std::string& name) {
  return std::string(CAVLINK_PRESET_DIR) + "/" + name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "cavlink_cli_test";
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = scratch_dir();
  const fs::path out = dir / ("stdout." + std::to_string(counter));
  const fs::path err = dir / ("stderr." + std::to_string(counter));
  ++counter;
  const std::string cmd = std::string(CAVLINK_BIN) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_config(const std::string& name, const json& j) {
  const fs::path p = scratch_dir() / name;
  std::ofstream f(p);
  f << j.dump(2) << "\n";
  return p;
}

// ---------------------------------------------------------------------------

TEST(CliTransfer, IonPresetBenchmarks) {
  const auto r = run_cli("transfer --config " + preset("ion_barium.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json doc = json::parse(r.out);
  const json& res = doc.at("result");
  EXPECT_NEAR(res.at("p_success").get<double>(), 0.3966, 5e-3);
  EXPECT_LT(res.at("conservation_defect").get<double>(), 1e-6);
  EXPECT_NEAR(res.at("cooperativity").get<double>(), 3.958, 0.01);
  const double bs = res.at("backscatter").at("per_attempt").get<double>();
  EXPECT_GE(bs, 1e-4);
  EXPECT_LE(bs, 1e-3);
  const json& man = doc.at("manifest");
  EXPECT_EQ(man.at("subcommand"), "transfer");
  EXPECT_FALSE(man.at("version").get<std::string>().empty());
  EXPECT_EQ(man.at("config").at("cavity").at("g_a").at("unit"), "rad_per_s");
}

TEST(CliTransfer, ByteIdenticalReruns) {
  const std::string args = "transfer --config " + preset("ion_barium.json");
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(CliTransfer, SetOverrideZeroDrive) {
  const auto r = run_cli("transfer --config " + preset("ion_barium.json") +
                         " --set omega0=0");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json res = json::parse(r.out).at("result");
  EXPECT_EQ(res.at("p_success").get<double>(), 0.0);
  EXPECT_NEAR(res.at("p_leftover").get<double>(), 1.0, 1e-9);
}

TEST(CliTransfer, CsvFormatFlattens) {
  const auto r = run_cli("transfer --config " + preset("ion_barium.json") +
                         " --format csv");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("key,value\n", 0), 0u);
  EXPECT_NE(r.out.find("\np_success,"), std::string::npos);
  EXPECT_NE(r.out.find("\nbackscatter.per_attempt,"), std::string::npos);
  // Manifest goes to stderr when no --out is given.
  const json man = json::parse(r.err);
  EXPECT_EQ(man.at("subcommand"), "transfer");
}

TEST(CliTransfer, OutFileAndCsvSidecar) {
  const fs::path dir = scratch_dir();
  const fs::path out = dir / "transfer.csv";
  const auto r = run_cli("transfer --config " + preset("ion_barium.json") +
                         " --format csv --out " + out.string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_TRUE(fs::exists(out));
  EXPECT_TRUE(fs::exists(out.string() + ".manifest.json"));
  const json man = json::parse(slurp(out.string() + ".manifest.json"));
  EXPECT_EQ(man.at("outputs").at(0), out.string());
}

// ---------------------------------------------------------------------------

TEST(CliExitCodes, ConfigProblemsReturnTwo) {
  EXPECT_EQ(run_cli("fly").exit_code, 2); // unknown subcommand
  EXPECT_EQ(run_cli("landscape --config " + preset("ion_barium.json"))
                .exit_code, 2); // missing required grid flags
  EXPECT_EQ(run_cli("transfer --config " + preset("ion_barium.json") +
                    " --set no_equals").exit_code, 2);
  EXPECT_EQ(run_cli("thermal --config " + preset("ion_barium.json") +
                    " --samples 5").exit_code, 2); // no --seed
  const fs::path bad = write_config("bad_field.json",
                                    json{{"cavities", json::object()}});
  const auto r = run_cli("transfer --config " + bad.string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("cavities"), std::string::npos);
}

TEST(CliExitCodes, MissingFileReturnsFour) {
  const auto r = run_cli("transfer --config /nonexistent/nowhere.json");
  EXPECT_EQ(r.exit_code, 4);
}

TEST(CliExitCodes, NumericFailureReturnsThree) {
  const auto r = run_cli("transfer --config " + preset("ion_barium.json") +
                         " --set omega0=1e30");
  EXPECT_EQ(r.exit_code, 3);
}

TEST(CliExitCodes, OptimizeBoundaryReturnsThree) {
  // Bracket entirely below the optimum: the best point is the upper edge.
  const auto r = run_cli("optimize --config " + preset("ion_barium.json") +
                         " --omega-lo 1.26e7 --omega-hi 6.3e7");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.err.find("omega0="), std::string::npos);
}

TEST(CliExitCodes, HelpIsSuccess) {
  EXPECT_EQ(run_cli("--help").exit_code, 0);
  EXPECT_EQ(run_cli("transfer --help").exit_code, 0);
}

// ---------------------------------------------------------------------------

TEST(CliLandscape, CsvBodyWithSummary) {
  const auto r = run_cli(
      "landscape --config " + preset("ion_barium.json") +
      " --format csv --omega0-min 7e7 --omega0-max 1.5e8 --omega0-points 2"
      " --duration-min 8e-7 --duration-max 1e-6 --duration-points 2");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header,
            "omega0_rad_s,duration_s,p_success,p_cavity,p_scatter_a,"
            "p_scatter_b,p_leftover");
  int n_rows = 0;
  for (std::string line; std::getline(lines, line);) ++n_rows;
  EXPECT_EQ(n_rows, 4);
  const json man = json::parse(r.err);
  EXPECT_EQ(man.at("summary").at("n_cells"), 4);
  EXPECT_EQ(man.at("summary").at("n_failed"), 0);
  EXPECT_TRUE(man.at("summary").contains("argmax"));
}

TEST(CliLandscape, OutFilesIncludeSummarySidecar) {
  const fs::path out = scratch_dir() / "scan.csv";
  const auto r = run_cli(
      "landscape --config " + preset("ion_barium.json") +
      " --format csv --out " + out.string() +
      " --omega0-min 1.1e8 --omega0-max 1.1e8 --omega0-points 1"
      " --duration-min 1e-6 --duration-max 1e-6 --duration-points 1");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(fs::exists(out));
  EXPECT_TRUE(fs::exists(out.string() + ".summary.json"));
  EXPECT_TRUE(fs::exists(out.string() + ".manifest.json"));
  const json summary = json::parse(slurp(out.string() + ".summary.json"));
  EXPECT_EQ(summary.at("n_cells"), 1);
  EXPECT_NEAR(summary.at("argmax").at("omega0_rad_s").get<double>(), 1.1e8, 1.0);
}

TEST(CliLandscape, JsonVariantCarriesCells) {
  const auto r = run_cli(
      "landscape --config " + preset("ion_barium.json") +
      " --omega0-min 1.634e8 --omega0-max 1.634e8 --omega0-points 1"
      " --duration-min 1e-6 --duration-max 1e-6 --duration-points 1");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json doc = json::parse(r.out);
  const json& cells = doc.at("result").at("cells");
  ASSERT_EQ(cells.size(), 1u);
  const double p = cells.at(0).at("result").at("p_success").get<double>();
  EXPECT_GT(p, 0.30);
  EXPECT_LT(p, 0.50);
}

TEST(CliOptimize, FindsTheRidge) {
  const auto r = run_cli("optimize --config " + preset("ion_barium.json") +
                         " --omega-lo 3.1e7 --omega-hi 2.6e8");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json res = json::parse(r.out).at("result");
  const double w = res.at("omega0_star").get<double>();
  EXPECT_GT(w, 6.3e7);  // 2pi x 10 MHz
  EXPECT_LT(w, 1.9e8);  // 2pi x 30 MHz
  EXPECT_GE(res.at("p_star").get<double>(), 0.30);
  EXPECT_GE(res.at("evaluations").get<int>(), 16);
}

// ---------------------------------------------------------------------------

TEST(CliProtocol, IonPresetHeraldsCleanBellPair) {
  const auto r = run_cli("protocol --config " + preset("ion_barium.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json res = json::parse(r.out).at("result");
  EXPECT_GT(res.at("fidelity").get<double>(), 1.0 - 1e-6);
  EXPECT_NEAR(res.at("p_herald").get<double>(), 0.3966, 5e-3);
  EXPECT_DOUBLE_EQ(res.at("interpulse_gap").get<double>(), 2.5e-6);
}

TEST(CliThermal, SeededRunsReproduce) {
  const std::string args = "thermal --config " + preset("ion_barium.json") +
                           " --seed 1 --samples 30";
  const auto a = run_cli(args);
  ASSERT_EQ(a.exit_code, 0) << a.err;
  const auto b = run_cli(args);
  EXPECT_EQ(a.out, b.out);
  const json res = json::parse(a.out).at("result");
  EXPECT_EQ(res.at("n_samples"), 30);
  EXPECT_EQ(res.at("seed"), 1);
  EXPECT_EQ(res.at("n_failed"), 0);
  EXPECT_GT(res.at("mean_infidelity").get<double>(), 1e-3);
  EXPECT_LT(res.at("mean_infidelity").get<double>(), 5e-2);
  EXPECT_EQ(json::parse(a.out).at("manifest").at("seed"), 1);

  const auto c = run_cli("thermal --config " + preset("ion_barium.json") +
                         " --seed 2 --samples 30");
  ASSERT_EQ(c.exit_code, 0);
  EXPECT_NE(json::parse(c.out).at("result").at("mean_infidelity"),
            res.at("mean_infidelity"));
}

TEST(CliModes, CsvTableForTheBariumChain) {
  const auto r = run_cli("modes --config " + preset("ion_barium.json") +
                         " --format csv");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "index,frequency_rad_s,participation_of_comm_ion");
  std::string first;
  std::getline(lines, first);
  std::istringstream row(first);
  std::string idx, freq, part;
  std::getline(row, idx, ',');
  std::getline(row, freq, ',');
  std::getline(row, part, ',');
  EXPECT_EQ(idx, "0");
  EXPECT_NEAR(std::stod(freq), 1.2566e6, 1e2);
  EXPECT_NEAR(std::stod(part), 0.2, 1e-9);
  int n_rows = 1;
  for (std::string line; std::getline(lines, line);) ++n_rows;
  EXPECT_EQ(n_rows, 25);
}

TEST(CliModes, JsonVariantCarriesDerivedScales) {
  const auto r = run_cli("modes --config " + preset("ion_barium.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json res = json::parse(r.out).at("result");
  EXPECT_NEAR(res.at("ell_m").get<double>(), 8.6276e-6, 1e-9);
  EXPECT_NEAR(res.at("com_spread_m").get<double>(), 3.92082e-8, 1e-11);
  EXPECT_EQ(res.at("frequencies_rad_s").size(), 25u);
  EXPECT_EQ(res.at("positions_m").size(), 25u);
}

TEST(CliThroughput, RateTable) {
  const auto r = run_cli("throughput --config " + preset("ion_barium.json") +
                         " --m-min 2 --m-max 8 --m-step 2 --format csv");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header,
            "M,N,t_cavity_s,t_photonic_bare_s,t_photonic_over_s,"
            "t_shuttling_s,beyond_single_cavity");
  int n_rows = 0;
  for (std::string line; std::getline(lines, line);) ++n_rows;
  EXPECT_EQ(n_rows, 4);

  const auto j = run_cli("throughput --config " + preset("ion_barium.json") +
                         " --m-min 20 --m-max 20 --m-step 2");
  const json rows = json::parse(j.out).at("result");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows.at(0).at("M"), 20);
  EXPECT_EQ(rows.at(0).at("N"), 500);
  EXPECT_NEAR(rows.at(0).at("t_cavity_s").get<double>(), 202.5e-6, 1e-10);
  EXPECT_FALSE(rows.at(0).at("beyond_single_cavity").get<bool>());
}

TEST(CliCapacity, IonPresetGeometry) {
  const auto r = run_cli("capacity --config " + preset("ion_barium.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json res = json::parse(r.out).at("result");
  EXPECT_NEAR(res.at("derived_cavity").at("rayleigh_m").get<double>(),
              1.1669e-3, 1e-6);
  EXPECT_NEAR(res.at("derived_cavity").at("kappa_rad_s").get<double>(),
              3.3637e5, 1e2);
  EXPECT_NEAR(res.at("derived_cavity").at("ringdown_s").get<double>(),
              2.973e-6, 5e-9);
  EXPECT_TRUE(res.at("ion").at("fits").get<bool>());
  EXPECT_EQ(res.at("ion").at("n_qubits"), 500);
}

TEST(CliCapacity, RydbergPresetPacking) {
  const auto r = run_cli("capacity --config " + preset("rydberg_rb.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json res = json::parse(r.out).at("result");
  EXPECT_NEAR(res.at("derived_cavity").at("rayleigh_m").get<double>(),
              4.0277e-4, 1e-7);
  EXPECT_EQ(res.at("rydberg").at("n_qubits"), 77);
}

TEST(CliScaling, RydbergPresetQueries) {
  const std::string cfg = " --config " + preset("rydberg_rb.json");
  const auto r2d = run_cli("scaling" + cfg + " --n 1000 --dimension 2");
  ASSERT_EQ(r2d.exit_code, 0) << r2d.err;
  const json res2d = json::parse(r2d.out).at("result");
  EXPECT_NEAR(res2d.at("relative_time").get<double>(), 31622.8, 0.1);
  EXPECT_NEAR(res2d.at("storage_error").get<double>(), 3.8462e-4, 1e-8);

  const auto rinf = run_cli("scaling" + cfg + " --n 1000 --dimension inf");
  const json resinf = json::parse(rinf.out).at("result");
  EXPECT_NEAR(resinf.at("relative_time").get<double>(), 1000.0, 1e-9);

  const auto rswap = run_cli("scaling" + cfg + " --swap-distance 5");
  const json resswap = json::parse(rswap.out).at("result");
  EXPECT_NEAR(resswap.at("swap_gate_error").get<double>(), 1.3e-2, 1e-12);
  EXPECT_NEAR(resswap.at("teleported_error").get<double>(), 2e-3, 1e-12);
}

} // namespace
