// Batch front end: one subcommand per experiment, JSON configs in,
// CSV/JSON artifacts out. Exit codes: 0 pass, 2 scientific assertion
// failed, 3 bad input or violated precondition.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <random>
#include <string>

#include "lcr/errors.hpp"
#include "lcr/fock_oracle.hpp"
#include "lcr/gaussian.hpp"
#include "lcr/harness.hpp"
#include "lcr/kernels.hpp"
#include "lcr/local_unitary.hpp"
#include "lcr/serialize.hpp"
#include "lcr/superposition.hpp"
#include "lcr/symplectic.hpp"
#include "lcr/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitAssertionFailed = 2;
constexpr int kExitBadInput = 3;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string format = "json";
};

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&tt, &tm_utc);
  std::strftime(buf, sizeof(buf), "%FT%TZ", &tm_utc);
  return buf;
}

json load_config(const CommonOpts& opts) {
  std::ifstream in(opts.config_path);
  if (!in) throw lcr::ConfigError("cannot read config " + opts.config_path);
  json j;
  in >> j;
  return j;
}

void write_out(const CommonOpts& opts, const std::string& name,
               const std::string& content) {
  const auto path = std::filesystem::path(opts.out_dir) / name;
  lcr::atomic_write_file(path, content);
  std::cout << "wrote " << path.string() << "\n";
}

void write_manifest(const CommonOpts& opts, const json& config,
                    std::uint64_t seed, const std::string& started) {
  const json manifest{{"config", config},
                      {"config_hash", lcr::fnv1a_hex(config.dump())},
                      {"artifact_version", lcr::kVersion},
                      {"seed", seed},
                      {"timestamps", {{"started", started},
                                      {"finished", iso_now()}}}};
  write_out(opts, "manifest.json", manifest.dump(2) + "\n");
}

Eigen::VectorXd vector_from(const json& j, const std::string& what) {
  if (!j.is_array()) throw lcr::ConfigError(what + " must be an array");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

lcr::Region region_from_config(const json& j, int n_sites) {
  lcr::require_keys(j, {"first", "length"}, "region_a");
  return lcr::Region::interval(j.at("first").get<int>(),
                               j.at("length").get<int>(), n_sites);
}

lcr::Perturbation perturbation_from_config(const json& j, int region_size,
                                           std::uint64_t seed) {
  lcr::require_keys(j, {"type", "dphi", "dpi", "r", "matrix", "squeeze"},
                    "perturbation");
  lcr::Perturbation p;
  const std::string type = j.at("type").get<std::string>();
  const auto displacement_fields = [&]() {
    p.dphi = j.contains("dphi") ? vector_from(j.at("dphi"), "dphi")
                                : Eigen::VectorXd::Zero(region_size);
    p.dpi = j.contains("dpi") ? vector_from(j.at("dpi"), "dpi")
                              : Eigen::VectorXd::Zero(region_size);
  };
  if (type == "displacement") {
    p.kind = lcr::PerturbationKind::Displacement;
    displacement_fields();
  } else if (type == "cat_pair") {
    p.kind = lcr::PerturbationKind::CatPair;
    displacement_fields();
  } else if (type == "squeeze") {
    p.kind = lcr::PerturbationKind::LocalSymplectic;
    const double r = j.at("r").get<double>();
    Eigen::VectorXd z(2 * region_size);
    for (int i = 0; i < region_size; ++i) {
      z[i] = std::exp(r);
      z[region_size + i] = std::exp(-r);
    }
    p.symplectic = z.asDiagonal();
  } else if (type == "symplectic") {
    p.kind = lcr::PerturbationKind::LocalSymplectic;
    const auto flat = vector_from(j.at("matrix"), "matrix");
    const int dim = 2 * region_size;
    if (flat.size() != dim * dim)
      throw lcr::ConfigError("symplectic matrix must be row-major 2r x 2r");
    p.symplectic.resize(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) p.symplectic(r, c) = flat[r * dim + c];
  } else if (type == "random_symplectic") {
    p.kind = lcr::PerturbationKind::LocalSymplectic;
    std::mt19937_64 rng(seed);
    const double squeeze =
        j.contains("squeeze") ? j.at("squeeze").get<double>() : 0.8;
    p.symplectic = lcr::random_symplectic(region_size, rng, squeeze);
  } else {
    throw lcr::ConfigError("unknown perturbation type " + type);
  }
  return p;
}

lcr::ScenarioConfig scenario_from_config(const json& j,
                                         const CommonOpts& opts) {
  lcr::require_keys(j,
                    {"spec", "region_a", "time", "perturbation", "margins",
                     "tolerance", "seed", "base_state"},
                    "scenario");
  lcr::ScenarioConfig cfg;
  cfg.spec = lcr::lattice_spec_from_json(j.at("spec"));
  cfg.region_a = region_from_config(j.at("region_a"), cfg.spec.n_sites);
  cfg.time = j.contains("time") ? j.at("time").get<double>() : 0.0;
  cfg.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 0;
  if (opts.seed) cfg.seed = *opts.seed;
  cfg.perturbation = perturbation_from_config(j.at("perturbation"),
                                              cfg.region_a.size(), cfg.seed);
  if (j.contains("margins"))
    cfg.margins = j.at("margins").get<std::vector<int>>();
  if (j.contains("tolerance")) cfg.tolerance = j.at("tolerance").get<double>();
  if (j.contains("base_state")) {
    std::ifstream in(j.at("base_state").get<std::string>());
    if (!in) throw lcr::ConfigError("cannot read base_state file");
    json bj;
    in >> bj;
    cfg.base = lcr::gaussian_state_from_json(bj);
  }
  cfg.validate();
  return cfg;
}

json causality_report_to_json(const lcr::CausalityReport& report) {
  return json{{"time", report.time},
              {"tolerance", report.tolerance},
              {"cone_radius_sites", report.cone_radius_sites},
              {"site_deviation", report.site_deviation},
              {"margins", report.margins},
              {"max_B_deviation", report.max_b_deviation},
              {"cone_edge_deviation", report.cone_edge_deviation},
              {"cone_edge_estimate", report.cone_edge_estimate},
              {"pass", report.pass}};
}

std::string profile_csv(const lcr::CausalityReport& report) {
  std::string csv = "site,deviation\n";
  char line[64];
  for (size_t s = 0; s < report.site_deviation.size(); ++s) {
    std::snprintf(line, sizeof(line), "%zu,%.17g\n", s,
                  report.site_deviation[s]);
    csv += line;
  }
  return csv;
}

int cmd_kernels(const CommonOpts& opts) {
  const json config = load_config(opts);
  lcr::require_keys(config, {"spec", "dumps", "identities", "lightcone"},
                    "kernels config");
  const auto spec = lcr::lattice_spec_from_json(config.at("spec"));
  const std::string started = iso_now();
  bool pass = true;

  if (config.contains("dumps")) {
    for (const auto& d : config.at("dumps")) {
      lcr::require_keys(d, {"role", "t"}, "dump");
      const std::string role_name = d.at("role").get<std::string>();
      lcr::KernelRole role;
      if (role_name == "G") role = lcr::KernelRole::G;
      else if (role_name == "g") role = lcr::KernelRole::g;
      else if (role_name == "gInv") role = lcr::KernelRole::gInv;
      else if (role_name == "E") role = lcr::KernelRole::E;
      else if (role_name == "dG_dt") role = lcr::KernelRole::dG_dt;
      else if (role_name == "dgInv_dt") role = lcr::KernelRole::dgInv_dt;
      else throw lcr::ConfigError("unknown kernel role " + role_name);
      const double t = d.contains("t") ? d.at("t").get<double>() : 0.0;
      const auto kernel = lcr::build_kernel(spec, role, t);

      std::string csv = "x,value\n";
      char line[64];
      for (int r = -(spec.n_sites - 1) / 2; r <= spec.n_sites / 2; ++r) {
        const int idx = (r + spec.n_sites) % spec.n_sites;
        std::snprintf(line, sizeof(line), "%.17g,%.17g\n", r * spec.spacing,
                      kernel.entries(idx, 0));
        csv += line;
      }
      char name[80];
      std::snprintf(name, sizeof(name), "kernel_%s_t%g.csv",
                    role_name.c_str(), t);
      write_out(opts, name, csv);
    }
  }

  if (config.contains("identities")) {
    json records = json::array();
    for (const auto& item : config.at("identities")) {
      lcr::require_keys(item, {"which", "t", "dt", "threshold"}, "identity");
      const auto which =
          lcr::kernel_identity_from_string(item.at("which").get<std::string>());
      const double t = item.at("t").get<double>();
      const double dt = item.at("dt").get<double>();
      const double threshold = item.contains("threshold")
                                   ? item.at("threshold").get<double>()
                                   : 1e-6;
      const double residual = lcr::verify_identity(spec, which, t, dt);
      if (residual > threshold) pass = false;
      records.push_back(json{{"identity", lcr::to_string(which)},
                             {"n", spec.n_sites},
                             {"m", spec.mass},
                             {"t", t},
                             {"dt", dt},
                             {"residual", residual}});
      std::cout << "identity " << lcr::to_string(which) << " t=" << t
                << " residual=" << residual << "\n";
    }
    write_out(opts, "identities.json", records.dump(2) + "\n");
  }

  if (config.contains("lightcone")) {
    const auto& lc = config.at("lightcone");
    lcr::require_keys(lc, {"t", "margin"}, "lightcone");
    const double margin =
        lc.contains("margin") ? lc.at("margin").get<double>() : 0.0;
    const auto prof =
        lcr::lightcone_profile(spec, lc.at("t").get<double>(), margin);
    std::string csv = "x,magnitude\n";
    char line[64];
    for (size_t i = 0; i < prof.distance.size(); ++i) {
      std::snprintf(line, sizeof(line), "%.17g,%.17g\n", prof.distance[i],
                    prof.magnitude[i]);
      csv += line;
    }
    write_out(opts, "lightcone.csv", csv);
    write_out(opts, "lightcone.json",
              json{{"decay_rate", prof.decay_rate},
                   {"fit_start", prof.fit_start}}
                      .dump(2) +
                  "\n");
  }

  write_manifest(opts, config, opts.seed.value_or(0), started);
  return pass ? kExitPass : kExitAssertionFailed;
}

int cmd_causality(const CommonOpts& opts) {
  const json config = load_config(opts);
  lcr::require_keys(config, {"scenario", "check"}, "causality config");
  const auto scenario = scenario_from_config(config.at("scenario"), opts);
  const std::string check =
      config.contains("check") ? config.at("check").get<std::string>()
                               : "perturbation";
  const std::string started = iso_now();

  bool pass = false;
  if (check == "perturbation" || check == "confinement") {
    const auto report = check == "perturbation"
                            ? lcr::run_causality_check(scenario)
                            : lcr::confinement_demo(scenario);
    write_out(opts, "report.json",
              causality_report_to_json(report).dump(2) + "\n");
    if (opts.format == "csv") write_out(opts, "profile.csv", profile_csv(report));
    std::cout << "max B deviation:";
    for (double d : report.max_b_deviation) std::cout << " " << d;
    std::cout << "\ncone edge deviation: " << report.cone_edge_deviation
              << "\n";
    pass = report.pass;
  } else if (check == "kick_equivalence") {
    const auto report = lcr::kick_equivalence_check(scenario);
    write_out(opts, "report.json",
              json{{"complement_distance", report.complement_distance},
                   {"reconstruction_residual", report.reconstruction_residual},
                   {"symplecticity_residual", report.symplecticity_residual},
                   {"pass", report.pass}}
                      .dump(2) +
                  "\n");
    std::cout << "reconstruction residual: " << report.reconstruction_residual
              << "\n";
    pass = report.pass;
  } else {
    throw lcr::ConfigError("unknown check " + check);
  }

  write_manifest(opts, config, scenario.seed, started);
  return pass ? kExitPass : kExitAssertionFailed;
}

int cmd_sweep(const CommonOpts& opts) {
  const json config = load_config(opts);
  lcr::require_keys(config,
                    {"scenario", "t_values", "margins", "pass_margins"},
                    "sweep config");
  lcr::SweepConfig sweep;
  sweep.scenario = scenario_from_config(config.at("scenario"), opts);
  sweep.t_values = config.at("t_values").get<std::vector<double>>();
  sweep.margins = config.at("margins").get<std::vector<int>>();
  std::vector<int> pass_margins;
  if (config.contains("pass_margins"))
    pass_margins = config.at("pass_margins").get<std::vector<int>>();

  const std::string started = iso_now();
  const auto rows = lcr::lightcone_sweep(sweep);
  write_out(opts, "sweep.csv", lcr::sweep_to_csv(rows));

  bool pass = true;
  for (const auto& row : rows)
    for (int enforced : pass_margins)
      if (row.margin == enforced &&
          row.max_b_deviation > sweep.scenario.tolerance)
        pass = false;
  write_manifest(opts, config, sweep.scenario.seed, started);
  return pass ? kExitPass : kExitAssertionFailed;
}

int cmd_factor_unitary(const CommonOpts& opts) {
  const json config = load_config(opts);
  lcr::require_keys(config, {"f1", "f2", "tol"}, "factor-unitary config");
  const auto f1 = lcr::complex_matrix_from_json(config.at("f1"));
  const auto f2 = lcr::complex_matrix_from_json(config.at("f2"));
  const double tol =
      config.contains("tol") ? config.at("tol").get<double>() : 1e-10;
  const std::string started = iso_now();

  const auto out = lcr::find_local_unitary(f1, f2, tol);
  write_out(opts, "factor_unitary.json",
            json{{"residual_unitarity", out.residual_unitarity},
                 {"residual_equation", out.residual_equation},
                 {"rank", out.rank},
                 {"path_taken", lcr::to_string(out.path_taken)},
                 {"unitary", lcr::complex_matrix_to_json(out.unitary)}}
                    .dump(2) +
                "\n");
  std::cout << "rank " << out.rank << " path " << lcr::to_string(out.path_taken)
            << " residual " << out.residual_equation << "\n";
  write_manifest(opts, config, opts.seed.value_or(0), started);
  const bool pass =
      out.residual_unitarity <= 10 * tol && out.residual_equation <= 10 * tol;
  return pass ? kExitPass : kExitAssertionFailed;
}

int cmd_cat_witness(const CommonOpts& opts) {
  const json config = load_config(opts);
  lcr::require_keys(config, {"scenario", "positivity_threshold"},
                    "cat-witness config");
  const auto scenario = scenario_from_config(config.at("scenario"), opts);
  const double threshold =
      config.contains("positivity_threshold")
          ? config.at("positivity_threshold").get<double>()
          : 1e-3;
  const std::string started = iso_now();

  const auto report = lcr::cat_scenario(scenario, threshold);
  write_out(opts, "cat_witness.json",
            json{{"branch_witness", report.branch_witness},
                 {"superposition_witness", report.superposition_witness},
                 {"margins", report.margins},
                 {"witness_by_margin", report.witness_by_margin},
                 {"positivity_threshold", threshold},
                 {"pass", report.pass}}
                    .dump(2) +
                "\n");
  std::cout << "superposition witness: " << report.superposition_witness
            << "\n";
  write_manifest(opts, config, scenario.seed, started);
  return report.pass ? kExitPass : kExitAssertionFailed;
}

int cmd_oracle(const CommonOpts& opts) {
  const json config = load_config(opts);
  lcr::require_keys(config, {"fock", "moments", "normalization"},
                    "oracle config");
  const auto& fj = config.at("fock");
  lcr::require_keys(fj, {"spec", "cutoff", "ref_frequency"}, "fock");
  lcr::FockLattice fl;
  fl.spec = lcr::lattice_spec_from_json(fj.at("spec"));
  fl.cutoff = fj.at("cutoff").get<int>();
  fl.ref_frequency = fj.contains("ref_frequency")
                         ? fj.at("ref_frequency").get<double>()
                         : 0.0;
  fl.validate();

  const std::string started = iso_now();
  json records = json::array();
  bool pass = true;

  if (config.contains("moments")) {
    const auto& mj = config.at("moments");
    lcr::require_keys(mj, {"phi_class", "pi_class", "times", "threshold"},
                      "moments");
    const auto phi = vector_from(mj.at("phi_class"), "phi_class");
    const auto pi = vector_from(mj.at("pi_class"), "pi_class");
    const auto times = mj.at("times").get<std::vector<double>>();
    const double threshold = mj.contains("threshold")
                                 ? mj.at("threshold").get<double>()
                                 : 1e-3;
    lcr::FockOracle oracle(fl);
    const auto cv = oracle.coherent_state_vector(phi, pi);
    const lcr::Region all =
        lcr::Region::interval(0, fl.spec.n_sites, fl.spec.n_sites);
    for (double t : times) {
      const auto mom = oracle.regional_moments(oracle.evolve(cv.state, t), all);
      const auto desc = lcr::restrict_to(
          lcr::evolve(lcr::coherent(fl.spec, phi, pi), t), all);
      const Eigen::MatrixXd raw =
          desc.cov_block + desc.mean_block * desc.mean_block.transpose();
      const double first_dev =
          (mom.first - desc.mean_block).cwiseAbs().maxCoeff();
      const double second_dev = (mom.second - raw).cwiseAbs().maxCoeff();
      const double residual = std::max(first_dev, second_dev);
      if (residual > threshold) pass = false;
      records.push_back(json{{"quantity", "coherent_moments"},
                             {"t", t},
                             {"oracle_value", mom.first[0]},
                             {"engine_value", desc.mean_block[0]},
                             {"cutoff", fl.cutoff},
                             {"residual", residual}});
    }
  }

  if (config.contains("normalization")) {
    const auto& nj = config.at("normalization");
    lcr::require_keys(
        nj, {"t_values", "window", "spacing", "modulus_threshold"},
        "normalization");
    lcr::PropagatorGridConfig grid;
    if (nj.contains("window"))
      grid.window_halfwidth = nj.at("window").get<double>();
    if (nj.contains("spacing"))
      grid.grid_spacing = nj.at("spacing").get<double>();
    const auto rep = lcr::normalization_check(
        fl, nj.at("t_values").get<std::vector<double>>(), grid);
    const double threshold = nj.contains("modulus_threshold")
                                 ? nj.at("modulus_threshold").get<double>()
                                 : 1e-3;
    if (rep.max_modulus_rel_deviation > threshold) pass = false;
    for (const auto& row : rep.rows)
      records.push_back(json{{"quantity", "propagator_modulus"},
                             {"t", row.t},
                             {"oracle_value", row.oracle_modulus},
                             {"engine_value", row.reference_modulus},
                             {"cutoff", fl.cutoff},
                             {"residual", row.modulus_rel_deviation}});
  }

  write_out(opts, "oracle.json", records.dump(2) + "\n");
  write_manifest(opts, config, opts.seed.value_or(0), started);
  return pass ? kExitPass : kExitAssertionFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice free-field causality experiments"};
  app.require_subcommand(1);
  app.fallthrough(true);

  CommonOpts opts;
  app.add_option("--config", opts.config_path, "JSON config file");
  app.add_option("--out", opts.out_dir, "output directory");
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "seed override");
  app.add_option("--format", opts.format, "stdout/report format")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* kernels = app.add_subcommand("kernels", "kernel dumps and identities");
  auto* causality =
      app.add_subcommand("causality", "Fig. 1 causality experiments");
  auto* sweep = app.add_subcommand("sweep", "light-cone (t, margin) sweep");
  auto* factor =
      app.add_subcommand("factor-unitary", "unitary completion from Grams");
  auto* cat = app.add_subcommand("cat-witness", "superposition witness");
  auto* oracle = app.add_subcommand("oracle", "truncated-oracle comparisons");

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) opts.seed = seed_value;
  if (opts.config_path.empty()) {
    std::cerr << "error: --config is required\n";
    return kExitBadInput;
  }

  try {
    if (kernels->parsed()) return cmd_kernels(opts);
    if (causality->parsed()) return cmd_causality(opts);
    if (sweep->parsed()) return cmd_sweep(opts);
    if (factor->parsed()) return cmd_factor_unitary(opts);
    if (cat->parsed()) return cmd_cat_witness(opts);
    if (oracle->parsed()) return cmd_oracle(opts);
  } catch (const lcr::RdmMismatch& e) {
    std::cerr << "RdmMismatch: " << e.what() << "\n";
    return kExitAssertionFailed;
  } catch (const lcr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
