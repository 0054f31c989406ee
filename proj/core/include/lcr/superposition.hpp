#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "lcr/gaussian.hpp"
#include "lcr/lattice.hpp"
#include "lcr/region.hpp"

namespace lcr {

// One displaced-vacuum branch of a superposition. The phase convention is
// the wavefunctional one: psi(phi) ~ exp(-1/2 (phi - phi_c)^T E (phi - phi_c))
// * exp(i pi_c . phi), with E the energy kernel (mode multiplier omega).
struct CoherentBranch {
  std::complex<double> amplitude;
  Eigen::VectorXd phi_class;
  Eigen::VectorXd pi_class;
};

struct CoherentSuperposition {
  LatticeSpec spec;
  std::vector<CoherentBranch> branches;
  double norm = 0.0;  // sqrt of sum_ij c_i* c_j <a_i|a_j>, computed

  // Validates shapes, requires mass > 0, computes `norm`. Throws
  // std::invalid_argument when the superposition has (numerically) zero
  // norm and MasslessVacuumError at m = 0.
  static CoherentSuperposition make(const LatticeSpec& spec,
                                    std::vector<CoherentBranch> branches);
};

// Displaced-vacuum inner product <a_i|a_j> in the wavefunctional phase
// convention above. Requires mass > 0.
std::complex<double> overlap(const LatticeSpec& spec,
                             const CoherentBranch& branch_i,
                             const CoherentBranch& branch_j);

// Hermitian PSD branch Gram matrix G_ij = <a_i|a_j>.
Eigen::MatrixXcd overlap_gram(const CoherentSuperposition& sup);

// Raw regional moments of the normalized superposition: first moments of
// (phi, pi) on the region and symmetrized second moments over the region's
// phase-space block.
struct RegionalMoments {
  Eigen::VectorXd first;   // length 2m
  Eigen::MatrixXd second;  // 2m x 2m, symmetric
};

RegionalMoments local_moments(const CoherentSuperposition& sup,
                              const Region& region);

// Max-norm deviation of the superposition's regional moments from the
// vacuum's. Requires every branch to be vacuum-equivalent on the region
// within 1e-10 (throws BranchNotVacuumEquivalent otherwise); a strictly
// positive return then certifies that the superposition's reduced state
// differs from the vacuum's.
double vacuum_witness(const CoherentSuperposition& sup, const Region& region);

inline constexpr double kBranchVacuumTol = 1e-10;

}  // namespace lcr
