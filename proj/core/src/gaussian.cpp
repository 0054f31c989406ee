#include "lcr/gaussian.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lcr/errors.hpp"
#include "lcr/symplectic.hpp"

namespace lcr {

namespace {

constexpr double kZeroModeTol = 1e-12;

std::vector<int> phase_space_indices(const Region& region, int n) {
  std::vector<int> idx;
  idx.reserve(2 * region.size());
  for (int s : region.sites()) idx.push_back(s);
  for (int s : region.sites()) idx.push_back(n + s);
  return idx;
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c) out(r, c) = m(rows[r], cols[c]);
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

Eigen::MatrixXd vacuum_covariance(const LatticeSpec& spec) {
  if (spec.mass <= 0.0)
    throw MasslessVacuumError("vacuum undefined at m = 0 (zero mode)");
  const Eigen::VectorXd w = mode_frequencies(spec);
  const int n = spec.n_sites;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  cov.topLeftCorner(n, n) = mode_operator(spec, (0.5 / w.array()).matrix());
  cov.bottomRightCorner(n, n) =
      mode_operator(spec, (0.5 * w.array()).matrix());
  return cov;
}

}  // namespace

GaussianState vacuum(const LatticeSpec& spec) {
  spec.validate();
  return GaussianState{spec, Eigen::VectorXd::Zero(2 * spec.n_sites),
                       vacuum_covariance(spec)};
}

GaussianState coherent(const LatticeSpec& spec,
                       const Eigen::VectorXd& phi_class,
                       const Eigen::VectorXd& pi_class) {
  spec.validate();
  const int n = spec.n_sites;
  if (phi_class.size() != n || pi_class.size() != n)
    throw std::invalid_argument("classical field length != n_sites");
  GaussianState state{spec, Eigen::VectorXd(2 * n), vacuum_covariance(spec)};
  state.mean.head(n) = phi_class;
  state.mean.tail(n) = pi_class;
  return state;
}

SymplecticPropagator propagator(const LatticeSpec& spec, double t) {
  spec.validate();
  const Eigen::VectorXd w = mode_frequencies(spec);
  const int n = spec.n_sites;
  if (t == 0.0)
    return SymplecticPropagator{spec, 0.0,
                                Eigen::MatrixXd::Identity(2 * n, 2 * n)};
  Eigen::VectorXd cos_wt(n), sinc_wt(n), wsin_wt(n);
  for (int j = 0; j < n; ++j) {
    cos_wt[j] = std::cos(w[j] * t);
    sinc_wt[j] = w[j] <= kZeroModeTol ? t : std::sin(w[j] * t) / w[j];
    wsin_wt[j] = w[j] * std::sin(w[j] * t);
  }
  Eigen::MatrixXd S(2 * n, 2 * n);
  const Eigen::MatrixXd c = mode_operator(spec, cos_wt);
  S.topLeftCorner(n, n) = c;
  S.topRightCorner(n, n) = mode_operator(spec, sinc_wt);
  S.bottomLeftCorner(n, n) = -mode_operator(spec, wsin_wt);
  S.bottomRightCorner(n, n) = c;
  return SymplecticPropagator{spec, t, std::move(S)};
}

GaussianState evolve(const GaussianState& state, double t) {
  const Eigen::MatrixXd& S = propagator(state.spec, t).matrix;
  GaussianState out{state.spec, S * state.mean,
                    S * state.covariance * S.transpose()};
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

ReducedDescriptor restrict_to(const GaussianState& state,
                              const Region& region) {
  if (region.empty())
    throw std::invalid_argument("cannot restrict to an empty region");
  region.check_bounds(state.n());
  const auto idx = phase_space_indices(region, state.n());
  return ReducedDescriptor{region, gather(state.mean, idx),
                           gather(state.covariance, idx, idx)};
}

double descriptor_distance(const ReducedDescriptor& a,
                           const ReducedDescriptor& b) {
  if (a.region != b.region)
    throw RegionMismatch("descriptor regions differ");
  const double dm = (a.mean_block - b.mean_block).cwiseAbs().maxCoeff();
  const double dc = (a.cov_block - b.cov_block).cwiseAbs().maxCoeff();
  return std::max(dm, dc);
}

GaussianState apply_local_displacement(const GaussianState& state,
                                       const Region& region,
                                       const Eigen::VectorXd& dphi,
                                       const Eigen::VectorXd& dpi) {
  const int n = state.n();
  if (dphi.size() != n || dpi.size() != n)
    throw std::invalid_argument("displacement length != n_sites");
  region.check_bounds(n);
  for (int s = 0; s < n; ++s)
    if (!region.contains(s) && (dphi[s] != 0.0 || dpi[s] != 0.0))
      throw SupportViolation("displacement has support outside the region");

  GaussianState out = state;
  out.mean.head(n) += dphi;
  out.mean.tail(n) += dpi;
  return out;
}

GaussianState apply_local_symplectic(const GaussianState& state,
                                     const Region& region,
                                     const Eigen::MatrixXd& local_sym) {
  const int n = state.n();
  region.check_bounds(n);
  const int r = region.size();
  if (local_sym.rows() != 2 * r || local_sym.cols() != 2 * r)
    throw std::invalid_argument("local symplectic has wrong shape");
  if (symplecticity_residual(local_sym) > 1e-10)
    throw NonSymplecticInput("matrix is not symplectic within 1e-10");

  const auto idx = phase_space_indices(region, n);
  GaussianState out = state;

  // only region rows/columns are written; the complement block stays
  // bit-identical
  const Eigen::VectorXd mean_r = local_sym * gather(state.mean, idx);
  for (int i = 0; i < 2 * r; ++i) out.mean[idx[i]] = mean_r[i];

  const Eigen::MatrixXd cov_rr =
      local_sym * gather(state.covariance, idx, idx) * local_sym.transpose();
  Eigen::MatrixXd cov_rfull(2 * r, 2 * n);
  for (int i = 0; i < 2 * r; ++i) cov_rfull.row(i) = state.covariance.row(idx[i]);
  const Eigen::MatrixXd new_rfull = local_sym * cov_rfull;
  for (int i = 0; i < 2 * r; ++i) {
    out.covariance.row(idx[i]) = new_rfull.row(i);
    out.covariance.col(idx[i]) = new_rfull.row(i).transpose();
  }
  for (int i = 0; i < 2 * r; ++i)
    for (int j = 0; j < 2 * r; ++j)
      out.covariance(idx[i], idx[j]) = 0.5 * (cov_rr(i, j) + cov_rr(j, i));
  return out;
}

LocalGaussianOp identity_local_op(int region_sites) {
  return LocalGaussianOp{
      Eigen::MatrixXd::Identity(2 * region_sites, 2 * region_sites),
      Eigen::VectorXd::Zero(region_sites),
      Eigen::VectorXd::Zero(region_sites)};
}

GaussianState apply_local_op(const GaussianState& state, const Region& region,
                             const LocalGaussianOp& op) {
  GaussianState out = apply_local_symplectic(state, region, op.symplectic);
  Eigen::VectorXd dphi = Eigen::VectorXd::Zero(state.n());
  Eigen::VectorXd dpi = Eigen::VectorXd::Zero(state.n());
  for (int i = 0; i < region.size(); ++i) {
    dphi[region.sites()[i]] = op.dphi[i];
    dpi[region.sites()[i]] = op.dpi[i];
  }
  return apply_local_displacement(out, region, dphi, dpi);
}

double purity_defect(const GaussianState& state) {
  const Eigen::VectorXd nu = symplectic_eigenvalues(state.covariance);
  return (nu.array() - 0.5).abs().maxCoeff();
}

double uncertainty_floor(const Eigen::MatrixXd& covariance) {
  const int m = static_cast<int>(covariance.rows()) / 2;
  Eigen::MatrixXcd h = covariance.cast<std::complex<double>>();
  h += std::complex<double>(0.0, 0.5) *
       symplectic_form(m).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

// Symplectic Gram-Schmidt: extracts `pairs` canonical pairs from the
// columns of `pool`, already restricted to the target subspace.
Eigen::MatrixXd symplectic_pairs_from_pool(Eigen::MatrixXd pool, int pairs,
                                           const Eigen::MatrixXd& omega) {
  const int dim = static_cast<int>(pool.rows());
  Eigen::MatrixXd basis(dim, 2 * pairs);
  std::vector<bool> used(pool.cols(), false);
  for (int p = 0; p < pairs; ++p) {
    // pick the largest remaining candidate as q-type vector
    int ia = -1;
    double best = 0.0;
    for (int c = 0; c < pool.cols(); ++c) {
      if (used[c]) continue;
      const double nrm = pool.col(c).norm();
      if (nrm > best) { best = nrm; ia = c; }
    }
    if (ia < 0 || best < 1e-10)
      throw DegenerateSpectrum("cannot complete a symplectic basis of the "
                               "uncorrelated subspace");
    const Eigen::VectorXd a = pool.col(ia) / best;
    used[ia] = true;

    // partner with the strongest symplectic pairing
    int ib = -1;
    double best_pair = 0.0;
    for (int c = 0; c < pool.cols(); ++c) {
      if (used[c]) continue;
      const double s = std::abs(a.dot(omega * pool.col(c)));
      if (s > best_pair) { best_pair = s; ib = c; }
    }
    if (ib < 0 || best_pair < 1e-9)
      throw DegenerateSpectrum("no symplectic partner found while framing the "
                               "uncorrelated subspace");
    const Eigen::VectorXd b = pool.col(ib) / a.dot(omega * pool.col(ib));
    used[ib] = true;

    basis.col(p) = a;
    basis.col(pairs + p) = b;
    // sweep the pair out of the remaining pool
    for (int c = 0; c < pool.cols(); ++c) {
      if (used[c]) continue;
      const Eigen::VectorXd y = pool.col(c);
      pool.col(c) = y + (b.dot(omega * y)) * a - (a.dot(omega * y)) * b;
    }
  }
  return basis;
}

}  // namespace

LocalGaussianOp find_local_gaussian_unitary(const GaussianState& s1,
                                            const GaussianState& s2,
                                            const Region& region, double tol) {
  if (s1.spec != s2.spec)
    throw std::invalid_argument("states live on different lattices");
  if (region.empty()) throw std::invalid_argument("empty region");
  region.check_bounds(s1.n());
  if (purity_defect(s1) > 1e-7 || purity_defect(s2) > 1e-7)
    throw std::invalid_argument("find_local_gaussian_unitary needs pure states");

  const int n = s1.n();
  const Region comp = region.complement(n);
  if (!comp.empty()) {
    const double dist =
        descriptor_distance(restrict_to(s1, comp), restrict_to(s2, comp));
    if (dist > tol)
      throw ComplementMismatch("complement descriptors differ by " +
                               std::to_string(dist));
  }

  const int r = region.size();
  const auto ridx = phase_space_indices(region, n);
  const auto cidx = phase_space_indices(comp, n);
  const Eigen::MatrixXd omega_r = symplectic_form(r);

  const Eigen::MatrixXd a1 = gather(s1.covariance, ridx, ridx);
  const Eigen::MatrixXd a2 = gather(s2.covariance, ridx, ridx);
  const Eigen::MatrixXd c1 = gather(s1.covariance, ridx, cidx);
  const Eigen::MatrixXd c2 = gather(s2.covariance, ridx, cidx);

  // rank and frame of the correlated subspace, from the cross block of s1
  int rank = 0;
  Eigen::MatrixXd x1(2 * r, 0), x2(2 * r, 0);
  if (comp.size() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        c1, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double sigma_max = svd.singularValues().size()
                                 ? svd.singularValues()[0]
                                 : 0.0;
    const double sigma_cut = std::max(1e-11, 1e-13 * sigma_max);
    for (int j = 0; j < svd.singularValues().size(); ++j)
      if (svd.singularValues()[j] > sigma_cut) ++rank;

    x1 = svd.matrixU().leftCols(rank);
    const Eigen::MatrixXd v = svd.matrixV().leftCols(rank);
    x2 = c2 * v *
         svd.singularValues().head(rank).cwiseInverse().asDiagonal();

    // s2's correlations must live on the same right-frame as s1's
    const double stray =
        rank == 0 ? c2.cwiseAbs().maxCoeff()
                  : (c2 - (c2 * v) * v.transpose()).cwiseAbs().maxCoeff();
    if (comp.size() > 0 && stray > std::max({1e-9, 10 * sigma_cut, tol}))
      throw ComplementMismatch(
          "cross-cut correlations of the states are incompatible");
  }

  if (rank % 2 != 0)
    throw DegenerateSpectrum("correlated subspace has odd dimension");

  if (rank > 0) {
    // the symplectic Gram of the correlated frame is fixed by the shared
    // complement; an ill-conditioned Gram means the frames cannot be matched
    const Eigen::MatrixXd gram = x1.transpose() * omega_r * x1;
    Eigen::JacobiSVD<Eigen::MatrixXd> gs(gram);
    if (gs.singularValues()[rank - 1] <
        1e-8 * std::max(1.0, gs.singularValues()[0]))
      throw DegenerateSpectrum("correlated-subspace symplectic Gram is "
                               "near-singular");
  }

  // symplectic complement of the correlated subspace for each state
  const int filler_pairs = r - rank / 2;
  Eigen::MatrixXd e1(2 * r, 2 * r), e2(2 * r, 2 * r);
  e1.leftCols(rank) = x1;
  e2.leftCols(rank) = x2;
  if (filler_pairs > 0) {
    const auto filler_frame = [&](const Eigen::MatrixXd& x,
                                  const Eigen::MatrixXd& a) {
      Eigen::MatrixXd pool = Eigen::MatrixXd::Identity(2 * r, 2 * r);
      if (rank > 0) {
        const Eigen::MatrixXd gram = x.transpose() * omega_r * x;
        pool -= x * gram.inverse() * x.transpose() * omega_r;
      }
      Eigen::MatrixXd z =
          symplectic_pairs_from_pool(pool, filler_pairs, omega_r);
      // pull the state back onto the filler frame; it must be pure there
      const Eigen::MatrixXd omega_f = symplectic_form(filler_pairs);
      const Eigen::MatrixXd coords =
          omega_f.inverse() * z.transpose() * omega_r;
      const Eigen::MatrixXd f = coords * a * coords.transpose();
      const WilliamsonForm wf = williamson(0.5 * (f + f.transpose()));
      if ((wf.nu.array() - 0.5).abs().maxCoeff() > 1e-6)
        throw DegenerateSpectrum(
            "uncorrelated block is not pure: cut separation failed");
      Eigen::VectorXd scale(2 * filler_pairs);
      for (int j = 0; j < filler_pairs; ++j)
        scale[j] = scale[filler_pairs + j] = std::sqrt(2.0 * wf.nu[j]);
      return Eigen::MatrixXd(z * wf.S * scale.asDiagonal());
    };
    e1.rightCols(2 * filler_pairs) = filler_frame(x1, a1);
    e2.rightCols(2 * filler_pairs) = filler_frame(x2, a2);
  }

  LocalGaussianOp op;
  op.symplectic = e2 * e1.inverse();
  if (symplecticity_residual(op.symplectic) > 1e-9)
    throw DegenerateSpectrum("assembled map failed to be symplectic");

  const Eigen::VectorXd mapped_mean = op.symplectic * gather(s1.mean, ridx);
  const Eigen::VectorXd delta = gather(s2.mean, ridx) - mapped_mean;
  op.dphi = delta.head(r);
  op.dpi = delta.tail(r);

  // the contract is the mapping, not the particular operation
  const GaussianState mapped = apply_local_op(s1, region, op);
  const Region everything = Region::interval(0, n, n);
  const double residual = descriptor_distance(restrict_to(mapped, everything),
                                              restrict_to(s2, everything));
  if (residual > std::max(tol, 1e-10))
    throw DegenerateSpectrum("mapping residual " + std::to_string(residual) +
                             " exceeds tolerance");
  return op;
}

}  // namespace lcr
