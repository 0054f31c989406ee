#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lcr/lattice.hpp"
#include "lcr/region.hpp"
#include "lcr/superposition.hpp"

namespace lcr {

// Brute-force ground truth: a few oscillator sites in truncated Fock space
// with dense Hamiltonians. Site variables match the Gaussian engine's unit
// canonical pairs, H = 1/2 sum pi_x^2 + 1/2 phi^T M2 phi.
struct FockLattice {
  LatticeSpec spec;
  int cutoff = 8;              // per-site Fock dimension
  double ref_frequency = 0.0;  // ladder-basis frequency; 0 -> band middle

  // Band-middle default sqrt(m^2 + 2/dx^2) balances truncation error
  // across modes.
  double effective_ref_frequency() const;
  long total_dimension() const;

  // Throws DimensionOverflow above 250000 total dimensions and
  // std::invalid_argument for n_sites > 5 or cutoff < 2.
  void validate() const;
};

Eigen::MatrixXd build_hamiltonian(const FockLattice& fl);

struct CoherentVector {
  Eigen::VectorXcd state;
  double max_mode_amplitude;  // largest single-site |alpha|
  bool truncation_warning;    // amplitude too large for the cutoff
};

// Caches the dense eigendecomposition so that repeated evolutions and
// moment evaluations are cheap.
class FockOracle {
 public:
  explicit FockOracle(const FockLattice& fl);

  const FockLattice& lattice() const { return fl_; }
  long dim() const { return dim_; }
  const Eigen::MatrixXd& hamiltonian() const { return ham_; }
  double ground_energy() const { return evals_[0]; }
  Eigen::VectorXcd ground_state() const;

  Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi, double t) const;

  // Displaced ground state of the coupled chain (product of per-site Weyl
  // operators applied to the exact ground state).
  CoherentVector coherent_state_vector(const Eigen::VectorXd& phi_class,
                                       const Eigen::VectorXd& pi_class) const;

  // rho reduced to `keep` (traces out the complement). Sites in `keep`
  // stay in their original order.
  Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho,
                                 const Region& keep) const;

  // Raw first and symmetrized second moments of (phi, pi) on a region.
  RegionalMoments regional_moments(const Eigen::VectorXcd& psi,
                                   const Region& region) const;

  // Per-site operators embedded in the full space act via index strides.
  Eigen::VectorXcd apply_site_op(const Eigen::VectorXcd& psi, int site,
                                 const Eigen::MatrixXcd& op) const;

  // d x d matrices in the per-site ladder basis.
  const Eigen::MatrixXcd& site_phi() const { return phi_op_; }
  const Eigen::MatrixXcd& site_pi() const { return pi_op_; }

  // Truncation defect of [phi, pi] = i restricted to the bottom
  // (cutoff - 2) ladder levels.
  double commutator_defect() const;

 private:
  FockLattice fl_;
  long dim_;
  Eigen::MatrixXd ham_;
  Eigen::MatrixXd evecs_;
  Eigen::VectorXd evals_;
  Eigen::MatrixXcd phi_op_, pi_op_;
};

// Single-oscillator propagator oracle on a uniform position grid with a
// spectral kinetic term; the workhorse behind the N(t) checks.
class GridPropagator {
 public:
  GridPropagator(double omega, double box_halfwidth, double spacing);

  int size() const { return static_cast<int>(points_.size()); }
  double spacing() const { return h_; }
  const Eigen::VectorXd& points() const { return points_; }

  // Delta-normalized kernel <phi_i|exp(-iHt)|phi_j> / h on the window
  // |phi| <= window_halfwidth; also returns the window point values.
  Eigen::MatrixXcd kernel(double t, double window_halfwidth,
                          Eigen::VectorXd* window_points = nullptr) const;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi, double t) const;

 private:
  double omega_, h_;
  Eigen::VectorXd points_;
  Eigen::MatrixXd evecs_;
  Eigen::VectorXd evals_;
};

struct PropagatorGridConfig {
  double window_halfwidth = 2.0;
  double grid_spacing = 0.05;
  double box_halfwidth = 0.0;  // 0 -> smallest box that is wrap-safe
};

struct NormalizationRow {
  double t;
  double max_rel_deviation;      // worst window entry vs N(t) exp(i S)
  double rms_rel_deviation;      // Frobenius-relative over the window
  double oracle_modulus;         // grid estimate of |N(t)|
  double reference_modulus;      // fitted constant / sqrt(sin(omega t))
  double modulus_rel_deviation;
};

struct NormalizationReport {
  double reference_t;
  std::vector<NormalizationRow> rows;
  double max_rel_deviation;
  double max_rms_rel_deviation;
  double max_modulus_rel_deviation;
};

// Compares the grid propagator against N(t) exp(i S(phi, phi1; t)) with
// the overall constant fixed at one reference time (the grid midpoint).
// Requires a single-site FockLattice and every t inside (0, pi/omega).
NormalizationReport normalization_check(const FockLattice& fl,
                                        const std::vector<double>& t_grid,
                                        const PropagatorGridConfig& grid = {});

}  // namespace lcr
