#include "lcr/superposition.hpp"

#include <cmath>
#include <stdexcept>

#include "lcr/errors.hpp"

namespace lcr {

namespace {

using Complex = std::complex<double>;

struct EnergyKernels {
  Eigen::MatrixXd E;      // mode multiplier omega
  Eigen::MatrixXd E_inv;  // mode multiplier 1/omega
};

EnergyKernels energy_kernels(const LatticeSpec& spec) {
  if (spec.mass <= 0.0)
    throw MasslessVacuumError("coherent overlaps need m > 0");
  const Eigen::VectorXd w = mode_frequencies(spec);
  return EnergyKernels{mode_operator(spec, w),
                       mode_operator(spec, w.cwiseInverse())};
}

void check_branch(const LatticeSpec& spec, const CoherentBranch& b) {
  if (b.phi_class.size() != spec.n_sites || b.pi_class.size() != spec.n_sites)
    throw std::invalid_argument("branch field length != n_sites");
}

Complex overlap_impl(const EnergyKernels& ek, const CoherentBranch& bi,
                     const CoherentBranch& bj) {
  const Eigen::VectorXd da = bi.phi_class - bj.phi_class;
  const Eigen::VectorXd db = bj.pi_class - bi.pi_class;
  const Eigen::VectorXd abar = 0.5 * (bi.phi_class + bj.phi_class);
  const double re =
      -0.25 * da.dot(ek.E * da) - 0.25 * db.dot(ek.E_inv * db);
  const double im = db.dot(abar);
  return std::exp(Complex(re, im));
}

}  // namespace

std::complex<double> overlap(const LatticeSpec& spec,
                             const CoherentBranch& branch_i,
                             const CoherentBranch& branch_j) {
  spec.validate();
  check_branch(spec, branch_i);
  check_branch(spec, branch_j);
  return overlap_impl(energy_kernels(spec), branch_i, branch_j);
}

CoherentSuperposition CoherentSuperposition::make(
    const LatticeSpec& spec, std::vector<CoherentBranch> branches) {
  spec.validate();
  if (branches.empty())
    throw std::invalid_argument("superposition needs at least one branch");
  for (const auto& b : branches) check_branch(spec, b);

  CoherentSuperposition sup{spec, std::move(branches), 0.0};
  const Eigen::MatrixXcd g = overlap_gram(sup);
  Complex norm2 = 0.0;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j)
      norm2 += std::conj(sup.branches[i].amplitude) *
               sup.branches[j].amplitude * g(i, j);
  if (std::abs(norm2.imag()) > 1e-10 * std::max(1.0, std::abs(norm2)))
    throw std::invalid_argument("superposition norm^2 is not real");
  if (norm2.real() <= 1e-14)
    throw std::invalid_argument("superposition has zero norm");
  sup.norm = std::sqrt(norm2.real());
  return sup;
}

Eigen::MatrixXcd overlap_gram(const CoherentSuperposition& sup) {
  const EnergyKernels ek = energy_kernels(sup.spec);
  const int nb = static_cast<int>(sup.branches.size());
  Eigen::MatrixXcd g(nb, nb);
  for (int i = 0; i < nb; ++i) {
    g(i, i) = 1.0;
    for (int j = i + 1; j < nb; ++j) {
      g(i, j) = overlap_impl(ek, sup.branches[i], sup.branches[j]);
      g(j, i) = std::conj(g(i, j));
    }
  }
  return g;
}

RegionalMoments local_moments(const CoherentSuperposition& sup,
                              const Region& region) {
  if (region.empty()) throw std::invalid_argument("empty region");
  region.check_bounds(sup.spec.n_sites);
  const EnergyKernels ek = energy_kernels(sup.spec);
  const Eigen::MatrixXcd g = overlap_gram(sup);
  const int nb = static_cast<int>(sup.branches.size());
  const int m = region.size();
  const auto& sites = region.sites();

  Eigen::VectorXcd first = Eigen::VectorXcd::Zero(2 * m);
  Eigen::MatrixXcd second = Eigen::MatrixXcd::Zero(2 * m, 2 * m);

  // vacuum-width parts of the second moments, common to every branch pair
  Eigen::MatrixXcd width = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      width(x, y) = 0.5 * ek.E_inv(sites[x], sites[y]);
      width(m + x, m + y) = 0.5 * ek.E(sites[x], sites[y]);
    }

  const double norm2 = sup.norm * sup.norm;
  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < nb; ++j) {
      const Complex w_ij = std::conj(sup.branches[i].amplitude) *
                           sup.branches[j].amplitude * g(i, j) / norm2;
      if (w_ij == 0.0) continue;
      const auto& bi = sup.branches[i];
      const auto& bj = sup.branches[j];
      const Eigen::VectorXd da = bi.phi_class - bj.phi_class;
      const Eigen::VectorXd db = bj.pi_class - bi.pi_class;
      // cross-matrix-element means of the bridged Gaussian
      const Eigen::VectorXcd mu =
          (0.5 * (bi.phi_class + bj.phi_class)).cast<Complex>() +
          Complex(0, 0.5) * (ek.E_inv * db).cast<Complex>();
      const Eigen::VectorXcd nu =
          (0.5 * (bi.pi_class + bj.pi_class)).cast<Complex>() +
          Complex(0, 0.5) * (ek.E * da).cast<Complex>();

      Eigen::VectorXcd mu_r(2 * m);
      for (int x = 0; x < m; ++x) {
        mu_r[x] = mu[sites[x]];
        mu_r[m + x] = nu[sites[x]];
      }
      first += w_ij * mu_r;
      second += w_ij * (width + mu_r * mu_r.transpose());
    }
  }

  RegionalMoments out;
  const double imag_leak = std::max(first.imag().cwiseAbs().maxCoeff(),
                                    second.imag().cwiseAbs().maxCoeff());
  if (imag_leak > 1e-9)
    throw std::logic_error("superposition moments acquired imaginary parts");
  out.first = first.real();
  out.second = 0.5 * (second.real() + second.real().transpose());
  return out;
}

double vacuum_witness(const CoherentSuperposition& sup, const Region& region) {
  const GaussianState vac = vacuum(sup.spec);
  const ReducedDescriptor vac_desc = restrict_to(vac, region);
  for (size_t i = 0; i < sup.branches.size(); ++i) {
    const GaussianState branch =
        coherent(sup.spec, sup.branches[i].phi_class, sup.branches[i].pi_class);
    const double d = descriptor_distance(restrict_to(branch, region), vac_desc);
    if (d > kBranchVacuumTol)
      throw BranchNotVacuumEquivalent(
          "branch " + std::to_string(i) + " deviates from the vacuum on the "
          "witness region by " + std::to_string(d));
  }

  const RegionalMoments mom = local_moments(sup, region);
  // vacuum means vanish, so its raw second moments equal its covariance
  const double first_dev = mom.first.cwiseAbs().maxCoeff();
  const double second_dev =
      (mom.second - vac_desc.cov_block).cwiseAbs().maxCoeff();
  return std::max(first_dev, second_dev);
}

}  // namespace lcr
