#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include "lcr/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
  int exit_code;
  fs::path out_dir;
};

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("lcr_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliRun run_cli(const std::string& tag, const std::string& subcommand,
               const json& config, const std::string& extra = "") {
  const fs::path dir = fresh_dir(tag);
  const fs::path cfg = dir / "config.json";
  {
    std::ofstream out(cfg);
    out << config.dump(2);
  }
  const std::string cmd = std::string(LCR_CLI_PATH) + " " + subcommand +
                          " --config " + cfg.string() + " --out " +
                          dir.string() + " " + extra + " > " +
                          (dir / "stdout.txt").string() + " 2> " +
                          (dir / "stderr.txt").string();
  const int raw = std::system(cmd.c_str());
  return CliRun{WEXITSTATUS(raw), dir};
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

json small_spec(int n, double mass) {
  return json{{"n_sites", n}, {"spacing", 1.0}, {"mass", mass},
              {"dispersion", "lattice"}};
}

json benchmark_scenario() {
  return json{{"spec", small_spec(96, 0.2)},
              {"region_a", {{"first", 44}, {"length", 6}}},
              {"time", 8.0},
              {"perturbation",
               {{"type", "displacement"},
                {"dphi", {1, 1, 1, 1, 1, 1}},
                {"dpi", {0, 0, 0, 0, 0, 0}}}},
              {"margins", {10, 16}},
              {"tolerance", 1e-8},
              {"seed", 7}};
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("kernels: dumps, identity reports and exit codes") {
  SUBCASE("single-mode g at the quarter period") {
    const json config{
        {"spec", small_spec(1, 1.0)},
        {"dumps", json::array({{{"role", "g"}, {"t", 1.5707963267948966}}})},
        {"identities",
         json::array({{{"which", "gG1"},
                       {"t", 0.7},
                       {"dt", 1e-4},
                       {"threshold", 1e-6}}})}};
    const auto run = run_cli("kernels_ok", "kernels", config);
    CHECK(run.exit_code == 0);
    const auto dump = read_text(run.out_dir / "kernel_g_t1.5708.csv");
    CHECK(dump.rfind("x,value\n", 0) == 0);
    CHECK(dump.find("0,1\n") != std::string::npos);
    const auto report = read_json(run.out_dir / "identities.json");
    REQUIRE(report.size() == 1);
    CHECK(report[0]["identity"] == "gG1");
    CHECK(report[0]["residual"].get<double>() <= 1e-6);
    CHECK(fs::exists(run.out_dir / "manifest.json"));
  }
  SUBCASE("benchmark identity residual threshold") {
    json identities = json::array();
    for (const char* which : {"gg", "gG1", "gG2", "GG_appendix"})
      identities.push_back(
          {{"which", which}, {"t", 0.7}, {"dt", 1e-4}, {"threshold", 1e-6}});
    const json config{{"spec", small_spec(64, 1.0)},
                      {"identities", identities}};
    CHECK(run_cli("kernels_bench", "kernels", config).exit_code == 0);
  }
  SUBCASE("caustic input exits 3") {
    const json config{
        {"spec", small_spec(1, 1.0)},
        {"dumps",
         json::array({{{"role", "g"}, {"t", 3.141592653589793}}})}};
    const auto run = run_cli("kernels_caustic", "kernels", config);
    CHECK(run.exit_code == 3);
    CHECK(read_text(run.out_dir / "stderr.txt").find("caustic") !=
          std::string::npos);
  }
}

TEST_CASE("causality: benchmark passes, wrap exits 3") {
  SUBCASE("displacement benchmark") {
    const json config{{"scenario", benchmark_scenario()},
                      {"check", "perturbation"}};
    const auto run = run_cli("causality_ok", "causality", config);
    CHECK(run.exit_code == 0);
    const auto report = read_json(run.out_dir / "report.json");
    CHECK(report["pass"].get<bool>());
    CHECK(report["max_B_deviation"][1].get<double>() <= 1e-8);
    CHECK(report["cone_edge_deviation"].get<double>() >= 1e-2);
  }
  SUBCASE("zero perturbation passes trivially") {
    json scenario = benchmark_scenario();
    scenario["perturbation"]["dphi"] = {0, 0, 0, 0, 0, 0};
    const json config{{"scenario", scenario}, {"check", "perturbation"}};
    CHECK(run_cli("causality_zero", "causality", config).exit_code == 0);
  }
  SUBCASE("csv format adds the per-site profile") {
    const json config{{"scenario", benchmark_scenario()},
                      {"check", "perturbation"}};
    const auto run =
        run_cli("causality_csv", "causality", config, "--format csv");
    CHECK(run.exit_code == 0);
    const std::string profile = read_text(run.out_dir / "profile.csv");
    CHECK(profile.rfind("site,deviation\n", 0) == 0);
    CHECK(std::count(profile.begin(), profile.end(), '\n') == 97);
  }
  SUBCASE("serialized base states are accepted") {
    const fs::path dir = fresh_dir("causality_base");
    const lcr::LatticeSpec spec{96, 1.0, 0.2, lcr::Dispersion::Lattice};
    const auto base = lcr::coherent(spec, Eigen::VectorXd::Constant(96, 0.2),
                                    Eigen::VectorXd::Zero(96));
    {
      std::ofstream out(dir / "base.json");
      out << lcr::to_json(base).dump();
    }
    json scenario = benchmark_scenario();
    scenario["base_state"] = (dir / "base.json").string();
    const json config{{"scenario", scenario}, {"check", "perturbation"}};
    const auto run = run_cli("causality_with_base", "causality", config);
    CHECK(run.exit_code == 0);
    CHECK(read_json(run.out_dir / "report.json")["pass"].get<bool>());
  }
  SUBCASE("kick equivalence") {
    json scenario = benchmark_scenario();
    scenario["spec"] = small_spec(20, 1.0);
    scenario["region_a"] = {{"first", 8}, {"length", 4}};
    scenario["time"] = 0.0;
    scenario["margins"] = {0};
    scenario["perturbation"] = {{"type", "squeeze"}, {"r", 0.6}};
    const json config{{"scenario", scenario}, {"check", "kick_equivalence"}};
    const auto run = run_cli("causality_kick", "causality", config);
    CHECK(run.exit_code == 0);
    const auto report = read_json(run.out_dir / "report.json");
    CHECK(report["reconstruction_residual"].get<double>() <= 1e-8);
  }
  SUBCASE("wrap-around exits 3") {
    json scenario = benchmark_scenario();
    scenario["time"] = 60.0;
    const json config{{"scenario", scenario}, {"check", "perturbation"}};
    CHECK(run_cli("causality_wrap", "causality", config).exit_code == 3);
  }
  SUBCASE("tolerance failure exits 2") {
    json scenario = benchmark_scenario();
    scenario["margins"] = {0};  // touching the cone edge: dispersive skirt
    const json config{{"scenario", scenario}, {"check", "perturbation"}};
    const auto run = run_cli("causality_fail", "causality", config);
    CHECK(run.exit_code == 2);
    CHECK_FALSE(read_json(run.out_dir / "report.json")["pass"].get<bool>());
  }
  SUBCASE("unknown config keys exit 3") {
    json config{{"scenario", benchmark_scenario()},
                {"check", "perturbation"}};
    config["scenario"]["typo_key"] = 1;
    CHECK(run_cli("causality_badkey", "causality", config).exit_code == 3);
  }
}

TEST_CASE("sweep: exact csv header and determinism under seeds") {
  json scenario = benchmark_scenario();
  scenario.erase("time");
  const json config{{"scenario", scenario},
                    {"t_values", {2.0, 4.0}},
                    {"margins", {0, 4, 8}},
                    {"pass_margins", {8}}};
  const auto run = run_cli("sweep_a", "sweep", config, "--seed 3");
  CHECK(run.exit_code == 0);
  const std::string csv = read_text(run.out_dir / "sweep.csv");
  CHECK(csv.rfind("t,margin,max_B_deviation,cone_edge_deviation\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

  const auto rerun = run_cli("sweep_b", "sweep", config, "--seed 3");
  CHECK(read_text(rerun.out_dir / "sweep.csv") == csv);

  const auto manifest = read_json(run.out_dir / "manifest.json");
  CHECK(manifest["seed"] == 3);
  CHECK(manifest["artifact_version"] == "1.0.0");
  CHECK(manifest["config_hash"] ==
        read_json(rerun.out_dir / "manifest.json")["config_hash"]);
}

TEST_CASE("factor-unitary: identity, swap, mismatch") {
  const auto pair_entry = [](double re, double im) {
    return json::array({re, im});
  };
  SUBCASE("identity pair") {
    const json eye{{pair_entry(1, 0), pair_entry(0, 0)},
                   {pair_entry(0, 0), pair_entry(1, 0)}};
    const json config{{"f1", eye}, {"f2", eye}, {"tol", 1e-10}};
    const auto run = run_cli("factor_eye", "factor-unitary", config);
    CHECK(run.exit_code == 0);
    const auto report = read_json(run.out_dir / "factor_unitary.json");
    CHECK(report["rank"] == 2);
    CHECK(report["path_taken"] == "full_rank");
    CHECK(report["residual_equation"].get<double>() <= 1e-12);
  }
  SUBCASE("2x1 swap example") {
    const json f1{{pair_entry(1, 0)}, {pair_entry(0, 0)}};
    const json f2{{pair_entry(0, 0)}, {pair_entry(1, 0)}};
    const json config{{"f1", f1}, {"f2", f2}, {"tol", 1e-10}};
    const auto run = run_cli("factor_swap", "factor-unitary", config);
    CHECK(run.exit_code == 0);
    const auto report = read_json(run.out_dir / "factor_unitary.json");
    CHECK(report["path_taken"] == "rank_deficient");
    CHECK(std::abs(report["unitary"][0][1][0].get<double>()) ==
          doctest::Approx(1.0));
  }
  SUBCASE("mismatched pair exits 2") {
    const json f1{{pair_entry(0.7071067811865476, 0), pair_entry(0, 0)},
                  {pair_entry(0, 0), pair_entry(0.7071067811865476, 0)}};
    const json f2{{pair_entry(1, 0), pair_entry(0, 0)},
                  {pair_entry(0, 0), pair_entry(0, 0)}};
    const json config{{"f1", f1}, {"f2", f2}, {"tol", 1e-10}};
    const auto run = run_cli("factor_bad", "factor-unitary", config);
    CHECK(run.exit_code == 2);
    CHECK(read_text(run.out_dir / "stderr.txt").find("RdmMismatch") !=
          std::string::npos);
  }
}

TEST_CASE("cat-witness benchmark") {
  const json config{
      {"scenario",
       {{"spec", small_spec(16, 1.0)},
        {"region_a", {{"first", 7}, {"length", 2}}},
        {"time", 0.0},
        {"perturbation",
         {{"type", "cat_pair"}, {"dphi", {1.0, 1.0}}, {"dpi", {0.0, 0.0}}}},
        {"margins", {0, 2, 4}},
        {"tolerance", 1e-8},
        {"seed", 1}}},
      {"positivity_threshold", 1e-3}};
  const auto run = run_cli("cat", "cat-witness", config);
  CHECK(run.exit_code == 0);
  const auto report = read_json(run.out_dir / "cat_witness.json");
  CHECK(report["pass"].get<bool>());
  CHECK(report["superposition_witness"].get<double>() >= 1e-3);
  CHECK(report["branch_witness"][0].get<double>() <= 1e-10);
}

TEST_CASE("oracle comparisons") {
  SUBCASE("coherent moments") {
    const json config{
        {"fock", {{"spec", small_spec(3, 1.0)}, {"cutoff", 8}}},
        {"moments",
         {{"phi_class", {0.4, -0.3, 0.2}},
          {"pi_class", {0.1, 0.2, -0.25}},
          {"times", {0.5, 1.0}},
          {"threshold", 1e-3}}}};
    const auto run = run_cli("oracle", "oracle", config);
    CHECK(run.exit_code == 0);
    const auto report = read_json(run.out_dir / "oracle.json");
    REQUIRE(report.size() == 2);
    for (const auto& record : report) {
      CHECK(record["quantity"] == "coherent_moments");
      CHECK(record["residual"].get<double>() <= 1e-3);
      CHECK(record["cutoff"] == 8);
    }
  }
  SUBCASE("propagator normalization") {
    const json config{
        {"fock", {{"spec", small_spec(1, 1.0)}, {"cutoff", 8}}},
        {"normalization",
         {{"t_values", {0.6, 1.2, 1.8}},
          {"spacing", 0.1},
          {"modulus_threshold", 1e-3}}}};
    const auto run = run_cli("oracle_norm", "oracle", config);
    CHECK(run.exit_code == 0);
    const auto report = read_json(run.out_dir / "oracle.json");
    REQUIRE(report.size() == 3);
    for (const auto& record : report)
      CHECK(record["quantity"] == "propagator_modulus");
  }
}

TEST_CASE("missing config exits 3") {
  const std::string cmd = std::string(LCR_CLI_PATH) +
                          " kernels --config /nonexistent.json > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 3);
}

TEST_SUITE_END();
