#include "lcr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lcr/errors.hpp"
#include "lcr/parallel.hpp"
#include "lcr/superposition.hpp"
#include "lcr/symplectic.hpp"

namespace lcr {

namespace {

int cone_radius_sites(double t, const LatticeSpec& spec) {
  return static_cast<int>(std::ceil(t / spec.spacing - 1e-12));
}

bool is_contiguous_interval(const Region& r, int n) {
  if (r.empty()) return false;
  if (r.size() == n) return true;
  // count boundary gaps on the circle; an interval has exactly one
  int gaps = 0;
  const auto& s = r.sites();
  for (size_t i = 0; i < s.size(); ++i) {
    const int next = s[(i + 1) % s.size()];
    if ((s[i] + 1) % n != next % n) ++gaps;
  }
  return gaps == 1;
}

GaussianState base_state(const ScenarioConfig& config) {
  if (config.base) {
    if (config.base->spec != config.spec)
      throw std::invalid_argument("base state lattice != scenario lattice");
    return *config.base;
  }
  return vacuum(config.spec);
}

GaussianState perturbed_state(const ScenarioConfig& config,
                              const GaussianState& base) {
  const int n = config.spec.n_sites;
  const auto& p = config.perturbation;
  switch (p.kind) {
    case PerturbationKind::Displacement: {
      Eigen::VectorXd dphi = Eigen::VectorXd::Zero(n);
      Eigen::VectorXd dpi = Eigen::VectorXd::Zero(n);
      if (p.dphi.size() != config.region_a.size() ||
          p.dpi.size() != config.region_a.size())
        throw std::invalid_argument("displacement length != region size");
      for (int i = 0; i < config.region_a.size(); ++i) {
        dphi[config.region_a.sites()[i]] = p.dphi[i];
        dpi[config.region_a.sites()[i]] = p.dpi[i];
      }
      return apply_local_displacement(base, config.region_a, dphi, dpi);
    }
    case PerturbationKind::LocalSymplectic:
      return apply_local_symplectic(base, config.region_a, p.symplectic);
    case PerturbationKind::CatPair:
      throw std::invalid_argument(
          "cat_pair perturbations only make sense in cat_scenario");
  }
  throw std::logic_error("unreachable");
}

// Per-site descriptor deviations plus full-block deviations per margin.
CausalityReport compare_states(const GaussianState& reference,
                               const GaussianState& probe,
                               const ScenarioConfig& config) {
  const int n = config.spec.n_sites;
  const int radius = cone_radius_sites(config.time, config.spec);

  CausalityReport report;
  report.time = config.time;
  report.tolerance = config.tolerance;
  report.cone_radius_sites = radius;
  report.margins = config.margins;

  report.site_deviation.resize(n);
  for (int s = 0; s < n; ++s) {
    const Region site{s};
    report.site_deviation[s] = descriptor_distance(restrict_to(reference, site),
                                                   restrict_to(probe, site));
  }

  for (int margin : config.margins) {
    const Region b = config.region_a.dilate(radius + margin, n);
    const Region big_b = b.complement(n);
    if (big_b.empty())
      throw PeriodicWrapError("margin " + std::to_string(margin) +
                              " pushes region b around the torus");
    report.max_b_deviation.push_back(descriptor_distance(
        restrict_to(reference, big_b), restrict_to(probe, big_b)));
  }

  double edge_dev = 0.0;
  double edge_est = 0.0;
  for (int s = 0; s < n; ++s) {
    const int dist = config.region_a.distance_to(s, n);
    if (dist == radius)
      edge_dev = std::max(edge_dev, report.site_deviation[s]);
    if (report.site_deviation[s] > config.tolerance)
      edge_est = std::max(edge_est, dist * config.spec.spacing);
  }
  report.cone_edge_deviation = edge_dev;
  report.cone_edge_estimate = edge_est;
  report.pass = true;
  for (double dev : report.max_b_deviation)
    if (!(dev <= config.tolerance)) report.pass = false;
  return report;
}

}  // namespace

void ScenarioConfig::validate() const {
  spec.validate();
  region_a.check_bounds(spec.n_sites);
  if (!is_contiguous_interval(region_a, spec.n_sites))
    throw std::invalid_argument("region a must be a contiguous interval");
  if (time < 0.0) throw std::invalid_argument("time must be >= 0");
  if (margins.empty()) throw std::invalid_argument("need at least one margin");
  for (int m : margins)
    if (m < 0) throw std::invalid_argument("margins must be >= 0");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");

  const int radius = cone_radius_sites(time, spec);
  const int max_margin = *std::max_element(margins.begin(), margins.end());
  if (region_a.size() + 2 * (radius + max_margin) >= spec.n_sites)
    throw PeriodicWrapError(
        "light cone of region a plus the largest margin wraps the torus");
}

std::pair<Region, Region> region_geometry(const Region& region_a, double t,
                                          const LatticeSpec& spec) {
  spec.validate();
  region_a.check_bounds(spec.n_sites);
  if (t < 0.0) throw std::invalid_argument("t must be >= 0");
  const int radius = cone_radius_sites(t, spec);
  if (region_a.size() + 2 * radius >= spec.n_sites)
    throw PeriodicWrapError("light cone of region a wraps the torus");
  const Region b = region_a.dilate(radius, spec.n_sites);
  return {b, b.complement(spec.n_sites)};
}

CausalityReport run_causality_check(const ScenarioConfig& config) {
  config.validate();
  const GaussianState psi1 = base_state(config);
  const GaussianState psi2 = perturbed_state(config, psi1);

  // assert, don't assume: the perturbation must be invisible on A at t = 0
  const Region big_a = config.region_a.complement(config.spec.n_sites);
  const double initial = descriptor_distance(restrict_to(psi1, big_a),
                                             restrict_to(psi2, big_a));
  if (initial > 1e-12)
    throw ComplementMismatch(
        "perturbation leaks outside region a at t = 0: deviation " +
        std::to_string(initial));

  return compare_states(evolve(psi1, config.time), evolve(psi2, config.time),
                        config);
}

CausalityReport confinement_demo(const ScenarioConfig& config) {
  config.validate();
  const GaussianState vac = vacuum(config.spec);
  const GaussianState excited = perturbed_state(config, vac);
  const Region big_a = config.region_a.complement(config.spec.n_sites);
  const double initial = descriptor_distance(restrict_to(vac, big_a),
                                             restrict_to(excited, big_a));
  if (initial > 1e-12)
    throw ComplementMismatch("excitation is not confined to region a");

  // the reference is the vacuum itself, not an evolved copy
  return compare_states(vac, evolve(excited, config.time), config);
}

KickEquivalenceReport kick_equivalence_check(const ScenarioConfig& config) {
  config.validate();
  const GaussianState s1 = base_state(config);
  const GaussianState s2 = perturbed_state(config, s1);
  const int n = config.spec.n_sites;

  KickEquivalenceReport report;
  const Region big_a = config.region_a.complement(n);
  report.complement_distance = descriptor_distance(restrict_to(s1, big_a),
                                                   restrict_to(s2, big_a));

  const LocalGaussianOp op =
      find_local_gaussian_unitary(s1, s2, config.region_a, config.tolerance);
  report.symplecticity_residual = symplecticity_residual(op.symplectic);

  const GaussianState rebuilt = apply_local_op(s1, config.region_a, op);
  const Region everything = Region::interval(0, n, n);
  report.reconstruction_residual = descriptor_distance(
      restrict_to(rebuilt, everything), restrict_to(s2, everything));
  report.pass = report.reconstruction_residual <= config.tolerance &&
                report.symplecticity_residual <= 1e-10;
  return report;
}

std::vector<SweepRow> lightcone_sweep(const SweepConfig& config) {
  if (config.t_values.empty() || config.margins.empty())
    throw std::invalid_argument("sweep needs t values and margins");

  std::vector<std::vector<SweepRow>> per_t(config.t_values.size());
  parallel_for(static_cast<int>(config.t_values.size()), [&](int i) {
    ScenarioConfig cell = config.scenario;
    cell.time = config.t_values[i];
    cell.margins = config.margins;
    const CausalityReport report = run_causality_check(cell);
    for (size_t m = 0; m < config.margins.size(); ++m)
      per_t[i].push_back(SweepRow{cell.time, config.margins[m],
                                  report.max_b_deviation[m],
                                  report.cone_edge_deviation});
  });

  std::vector<SweepRow> rows;
  for (const auto& chunk : per_t)
    rows.insert(rows.end(), chunk.begin(), chunk.end());
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "t,margin,max_B_deviation,cone_edge_deviation\n";
  char line[160];
  for (const auto& row : rows) {
    std::snprintf(line, sizeof(line), "%.17g,%d,%.17g,%.17g\n", row.t,
                  row.margin, row.max_b_deviation, row.cone_edge_deviation);
    out += line;
  }
  return out;
}

CatScenarioReport cat_scenario(const ScenarioConfig& config,
                               double positivity_threshold) {
  config.validate();
  if (config.perturbation.kind != PerturbationKind::CatPair)
    throw std::invalid_argument("cat_scenario needs a cat_pair perturbation");
  const int n = config.spec.n_sites;
  const auto& p = config.perturbation;
  if (p.dphi.size() != config.region_a.size() ||
      p.dpi.size() != config.region_a.size())
    throw std::invalid_argument("displacement length != region size");

  Eigen::VectorXd dphi = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd dpi = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < config.region_a.size(); ++i) {
    dphi[config.region_a.sites()[i]] = p.dphi[i];
    dpi[config.region_a.sites()[i]] = p.dpi[i];
  }

  const CoherentBranch plus{1.0, dphi, dpi};
  const CoherentBranch minus{1.0, -dphi, -dpi};
  const Region big_a = config.region_a.complement(n);

  CatScenarioReport report;
  for (const auto& branch : {plus, minus}) {
    const auto single = CoherentSuperposition::make(config.spec, {branch});
    report.branch_witness.push_back(vacuum_witness(single, big_a));
  }
  const auto cat = CoherentSuperposition::make(config.spec, {plus, minus});
  report.superposition_witness = vacuum_witness(cat, big_a);

  report.margins = config.margins;
  for (int margin : config.margins) {
    const Region far = config.region_a.dilate(margin, n).complement(n);
    if (far.empty())
      throw PeriodicWrapError("witness margin wraps the torus");
    report.witness_by_margin.push_back(vacuum_witness(cat, far));
  }

  report.pass = report.superposition_witness >= positivity_threshold;
  for (double w : report.branch_witness)
    if (w > kBranchVacuumTol) report.pass = false;
  return report;
}

}  // namespace lcr
