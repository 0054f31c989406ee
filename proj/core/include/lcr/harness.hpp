#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcr/gaussian.hpp"
#include "lcr/lattice.hpp"
#include "lcr/region.hpp"

namespace lcr {

enum class PerturbationKind { Displacement, LocalSymplectic, CatPair };

// A local perturbation supported on the scenario's region a. Displacement
// components are region-local (one entry per region site); the symplectic
// block acts on the region's (phi, pi) coordinates.
struct Perturbation {
  PerturbationKind kind = PerturbationKind::Displacement;
  Eigen::VectorXd dphi;
  Eigen::VectorXd dpi;
  Eigen::MatrixXd symplectic;
};

struct ScenarioConfig {
  LatticeSpec spec;
  Region region_a;  // contiguous interval
  double time = 0.0;
  Perturbation perturbation;
  std::vector<int> margins = {0};
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
  std::optional<GaussianState> base;  // defaults to the vacuum

  // Checks interval contiguity, margin ordering and the no-wrap condition
  // for the largest margin. Throws PeriodicWrapError / invalid_argument.
  void validate() const;
};

// Fig. 1 geometry: b is region a dilated by ceil(t / dx) sites on each
// side (maximal signal speed 1), B its complement.
std::pair<Region, Region> region_geometry(const Region& region_a, double t,
                                          const LatticeSpec& spec);

struct CausalityReport {
  double time = 0.0;
  double tolerance = 0.0;
  int cone_radius_sites = 0;
  std::vector<double> site_deviation;     // per-site descriptor deviation
  std::vector<int> margins;
  std::vector<double> max_b_deviation;    // full-block deviation per margin
  double cone_edge_deviation = 0.0;       // at distance = cone radius
  double cone_edge_estimate = 0.0;        // furthest distance above tolerance
  bool pass = false;
};

// Evolves the base state and its locally perturbed copy, then reports the
// descriptor deviation outside the light cone of region a.
CausalityReport run_causality_check(const ScenarioConfig& config);

// Same sweep against the true vacuum: an excitation confined to region a
// must leave every out-of-cone descriptor vacuum-indistinguishable.
CausalityReport confinement_demo(const ScenarioConfig& config);

struct KickEquivalenceReport {
  double complement_distance = 0.0;       // at t = 0, must be ~0
  double reconstruction_residual = 0.0;   // after reapplying the found op
  double symplecticity_residual = 0.0;
  bool pass = false;
};

// Realizes the kick claim at Gaussian level: the perturbed state is
// reproduced by a local Gaussian unitary found from the descriptors alone.
KickEquivalenceReport kick_equivalence_check(const ScenarioConfig& config);

struct SweepConfig {
  ScenarioConfig scenario;        // time field ignored
  std::vector<double> t_values;
  std::vector<int> margins;
};

struct SweepRow {
  double t;
  int margin;
  double max_b_deviation;
  double cone_edge_deviation;
};

// Rows ordered by (t, margin) regardless of execution order.
std::vector<SweepRow> lightcone_sweep(const SweepConfig& config);

// Exact CSV contract: header t,margin,max_B_deviation,cone_edge_deviation.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

struct CatScenarioReport {
  std::vector<double> branch_witness;     // one per branch, <= 1e-10
  double superposition_witness = 0.0;     // on A = complement of a
  std::vector<int> margins;
  std::vector<double> witness_by_margin;  // on complement of dilate(a, m)
  bool pass = false;
};

// Certifies the superposition claim: each +-displaced branch is vacuum on
// A while their equal-weight superposition is not.
CatScenarioReport cat_scenario(const ScenarioConfig& config,
                               double positivity_threshold);

}  // namespace lcr
