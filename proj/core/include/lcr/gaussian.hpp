#pragma once

#include <Eigen/Dense>

#include "lcr/lattice.hpp"
#include "lcr/region.hpp"

namespace lcr {

// Pure Gaussian field state over lattice phase space, ordered
// (phi_1..phi_n, pi_1..pi_n). Covariances are symmetrized central moments;
// the vacuum is diagonal in mode space with <phi phi> = 1/(2 omega) and
// <pi pi> = omega/2, so canonical pairs carry unit commutator and purity
// means symplectic eigenvalue 1/2.
struct GaussianState {
  LatticeSpec spec;
  Eigen::VectorXd mean;        // length 2n
  Eigen::MatrixXd covariance;  // 2n x 2n symmetric

  int n() const { return spec.n_sites; }
};

// Region-restricted moments: the operational stand-in for a Gaussian
// reduced density matrix. Block ordering matches the state: region phis
// first, then region pis.
struct ReducedDescriptor {
  Region region;
  Eigen::VectorXd mean_block;
  Eigen::MatrixXd cov_block;
};

// Exact phase-space flow of the free Hamiltonian: per mode
// [[cos(wt), sin(wt)/w], [-w sin(wt), cos(wt)]]. Entire in t, no caustics.
struct SymplecticPropagator {
  LatticeSpec spec;
  double time;
  Eigen::MatrixXd matrix;  // 2n x 2n
};

// Throws MasslessVacuumError for mass = 0.
GaussianState vacuum(const LatticeSpec& spec);

// Displaced vacuum: mean = (phi_class, pi_class), vacuum covariance.
GaussianState coherent(const LatticeSpec& spec,
                       const Eigen::VectorXd& phi_class,
                       const Eigen::VectorXd& pi_class);

SymplecticPropagator propagator(const LatticeSpec& spec, double t);

GaussianState evolve(const GaussianState& state, double t);

ReducedDescriptor restrict_to(const GaussianState& state, const Region& region);

// max of the mean and covariance block max-norm differences. Zero iff the
// Gaussian reduced density matrices coincide. Throws RegionMismatch.
double descriptor_distance(const ReducedDescriptor& a,
                           const ReducedDescriptor& b);

// Weyl displacement supported on `region`: mean shifts, covariance fixed.
// dphi/dpi are full-length vectors that must vanish off the region.
GaussianState apply_local_displacement(const GaussianState& state,
                                       const Region& region,
                                       const Eigen::VectorXd& dphi,
                                       const Eigen::VectorXd& dpi);

// Gaussian local unitary: conjugates the region block by a symplectic
// matrix on the region's (phi, pi) coordinates. The complement block is
// never touched, so its descriptor is bitwise unchanged.
GaussianState apply_local_symplectic(const GaussianState& state,
                                     const Region& region,
                                     const Eigen::MatrixXd& local_sym);

struct LocalGaussianOp {
  Eigen::MatrixXd symplectic;  // 2r x 2r on region modes
  Eigen::VectorXd dphi;        // length r
  Eigen::VectorXd dpi;
};

LocalGaussianOp identity_local_op(int region_sites);

// Applies the symplectic part, then the displacement.
GaussianState apply_local_op(const GaussianState& state, const Region& region,
                             const LocalGaussianOp& op);

// Given two pure states with equal complement descriptors, constructs a
// local Gaussian operation on `region` mapping s1 to s2. The operation is
// gauge-non-unique; only the mapping is contracted. Throws
// ComplementMismatch when the precondition fails and DegenerateSpectrum
// when the cut correlations cannot be separated stably.
LocalGaussianOp find_local_gaussian_unitary(const GaussianState& s1,
                                            const GaussianState& s2,
                                            const Region& region, double tol);

// Largest violation of |nu - 1/2| over the symplectic spectrum.
double purity_defect(const GaussianState& state);

// Least eigenvalue of cov + (i/2) Omega; >= 0 (up to roundoff) for any
// physical covariance.
double uncertainty_floor(const Eigen::MatrixXd& covariance);

}  // namespace lcr
