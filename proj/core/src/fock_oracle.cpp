#include "lcr/fock_oracle.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "lcr/errors.hpp"
#include "lcr/kernels.hpp"

namespace lcr {

namespace {

using Complex = std::complex<double>;

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXd ladder(int d) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace

double FockLattice::effective_ref_frequency() const {
  if (ref_frequency > 0.0) return ref_frequency;
  return std::sqrt(spec.mass * spec.mass +
                   2.0 / (spec.spacing * spec.spacing));
}

long FockLattice::total_dimension() const {
  long dim = 1;
  for (int s = 0; s < spec.n_sites; ++s) dim *= cutoff;
  return dim;
}

void FockLattice::validate() const {
  spec.validate();
  if (spec.n_sites > 5)
    throw std::invalid_argument("Fock oracle handles at most 5 sites");
  if (cutoff < 2) throw std::invalid_argument("cutoff must be >= 2");
  if (ref_frequency < 0.0)
    throw std::invalid_argument("ref_frequency must be positive (or 0 = auto)");
  if (total_dimension() > 250000)
    throw DimensionOverflow("total Fock dimension " +
                            std::to_string(total_dimension()) +
                            " exceeds the dense-oracle cap of 250000");
}

Eigen::MatrixXd build_hamiltonian(const FockLattice& fl) {
  fl.validate();
  const int d = fl.cutoff;
  const int n = fl.spec.n_sites;
  const double wr = fl.effective_ref_frequency();

  const Eigen::MatrixXd a = ladder(d);
  const Eigen::MatrixXd phi = (a + a.transpose()) / std::sqrt(2.0 * wr);
  // pi = i sqrt(wr/2) (a' - a); pi^2 is real, so H stays real symmetric
  const Eigen::MatrixXd pi_im = std::sqrt(0.5 * wr) * (a.transpose() - a);
  const Eigen::MatrixXd pi2 = -(pi_im * pi_im);
  const Eigen::MatrixXd m2 = quadratic_form_matrix(fl.spec);

  const auto embed = [&](int site, const Eigen::MatrixXd& op) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
    for (int s = 0; s < n; ++s)
      out = kron(out, s == site ? op : Eigen::MatrixXd::Identity(d, d));
    return out;
  };
  const auto embed2 = [&](int sa, const Eigen::MatrixXd& oa, int sb,
                          const Eigen::MatrixXd& ob) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
    for (int s = 0; s < n; ++s) {
      if (s == sa) out = kron(out, oa);
      else if (s == sb) out = kron(out, ob);
      else out = kron(out, Eigen::MatrixXd::Identity(d, d));
    }
    return out;
  };

  const long dim = fl.total_dimension();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int s = 0; s < n; ++s)
    h += embed(s, 0.5 * pi2 + 0.5 * m2(s, s) * phi * phi);
  for (int sa = 0; sa < n; ++sa)
    for (int sb = sa + 1; sb < n; ++sb)
      if (m2(sa, sb) != 0.0)
        h += m2(sa, sb) * embed2(sa, phi, sb, phi);
  return h;
}

FockOracle::FockOracle(const FockLattice& fl)
    : fl_(fl), dim_(fl.total_dimension()), ham_(build_hamiltonian(fl)) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ham_);
  evecs_ = es.eigenvectors();
  evals_ = es.eigenvalues();

  const int d = fl_.cutoff;
  const double wr = fl_.effective_ref_frequency();
  const Eigen::MatrixXd a = ladder(d);
  phi_op_ = ((a + a.transpose()) / std::sqrt(2.0 * wr)).cast<Complex>();
  pi_op_ = Complex(0.0, 1.0) *
           (std::sqrt(0.5 * wr) * (a.transpose() - a)).cast<Complex>();
}

Eigen::VectorXcd FockOracle::ground_state() const {
  return evecs_.col(0).cast<Complex>();
}

Eigen::VectorXcd FockOracle::evolve(const Eigen::VectorXcd& psi,
                                    double t) const {
  if (psi.size() != dim_) throw std::invalid_argument("state dimension");
  const Eigen::VectorXd re = evecs_.transpose() * psi.real();
  const Eigen::VectorXd im = evecs_.transpose() * psi.imag();
  Eigen::VectorXcd z(dim_);
  for (long j = 0; j < dim_; ++j)
    z[j] = std::exp(Complex(0.0, -evals_[j] * t)) * Complex(re[j], im[j]);
  const Eigen::VectorXd out_re = evecs_ * z.real();
  const Eigen::VectorXd out_im = evecs_ * z.imag();
  Eigen::VectorXcd out(dim_);
  out.real() = out_re;
  out.imag() = out_im;
  return out;
}

Eigen::VectorXcd FockOracle::apply_site_op(const Eigen::VectorXcd& psi,
                                           int site,
                                           const Eigen::MatrixXcd& op) const {
  const int d = fl_.cutoff;
  const int n = fl_.spec.n_sites;
  if (site < 0 || site >= n) throw std::invalid_argument("site out of range");
  if (op.rows() != d || op.cols() != d)
    throw std::invalid_argument("site operator must be cutoff x cutoff");

  long stride = 1;
  for (int s = site + 1; s < n; ++s) stride *= d;
  const long block = stride * d;

  Eigen::VectorXcd out(psi.size());
  Eigen::VectorXcd tmp(d);
  for (long base = 0; base < psi.size(); base += block) {
    for (long r = 0; r < stride; ++r) {
      for (int k = 0; k < d; ++k) tmp[k] = psi[base + k * stride + r];
      tmp = (op * tmp).eval();
      for (int k = 0; k < d; ++k) out[base + k * stride + r] = tmp[k];
    }
  }
  return out;
}

CoherentVector FockOracle::coherent_state_vector(
    const Eigen::VectorXd& phi_class, const Eigen::VectorXd& pi_class) const {
  const int n = fl_.spec.n_sites;
  if (phi_class.size() != n || pi_class.size() != n)
    throw std::invalid_argument("classical field length != n_sites");
  const double wr = fl_.effective_ref_frequency();

  CoherentVector out;
  out.state = ground_state();
  out.max_mode_amplitude = 0.0;
  for (int s = 0; s < n; ++s) {
    if (phi_class[s] == 0.0 && pi_class[s] == 0.0) continue;
    // Weyl generator pi_c phi - phi_c pi, exponentiated per site
    const Eigen::MatrixXcd gen =
        pi_class[s] * phi_op_ - phi_class[s] * pi_op_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gen);
    Eigen::VectorXcd phase(fl_.cutoff);
    for (int k = 0; k < fl_.cutoff; ++k)
      phase[k] = std::exp(Complex(0.0, es.eigenvalues()[k]));
    const Eigen::MatrixXcd weyl = es.eigenvectors() * phase.asDiagonal() *
                                  es.eigenvectors().adjoint();
    out.state = apply_site_op(out.state, s, weyl);
    const double alpha =
        std::sqrt(0.5 * wr * phi_class[s] * phi_class[s] +
                  0.5 * pi_class[s] * pi_class[s] / wr);
    out.max_mode_amplitude = std::max(out.max_mode_amplitude, alpha);
  }
  // Poisson tail of |alpha|^2 above the kept ladder levels
  const double a2 = out.max_mode_amplitude * out.max_mode_amplitude;
  double kept = 0.0, term = std::exp(-a2);
  for (int k = 0; k < fl_.cutoff - 1; ++k) {
    kept += term;
    term *= a2 / (k + 1);
  }
  out.truncation_warning = (1.0 - kept) > 1e-6;
  return out;
}

Eigen::MatrixXcd FockOracle::partial_trace(const Eigen::MatrixXcd& rho,
                                           const Region& keep) const {
  if (rho.rows() != dim_ || rho.cols() != dim_)
    throw std::invalid_argument("density matrix dimension");
  keep.check_bounds(fl_.spec.n_sites);
  const int d = fl_.cutoff;
  const int n = fl_.spec.n_sites;

  std::vector<long> site_stride(n);
  long acc = 1;
  for (int s = n - 1; s >= 0; --s) {
    site_stride[s] = acc;
    acc *= d;
  }
  std::vector<int> kept(keep.sites().begin(), keep.sites().end());
  std::vector<int> traced;
  for (int s = 0; s < n; ++s)
    if (!keep.contains(s)) traced.push_back(s);

  long keep_dim = 1;
  for (size_t i = 0; i < kept.size(); ++i) keep_dim *= d;
  long traced_dim = 1;
  for (size_t i = 0; i < traced.size(); ++i) traced_dim *= d;

  const auto full_index = [&](long keep_idx, long trace_idx) {
    long idx = 0;
    long k = keep_idx;
    for (int i = static_cast<int>(kept.size()) - 1; i >= 0; --i) {
      idx += (k % d) * site_stride[kept[i]];
      k /= d;
    }
    long tr = trace_idx;
    for (int i = static_cast<int>(traced.size()) - 1; i >= 0; --i) {
      idx += (tr % d) * site_stride[traced[i]];
      tr /= d;
    }
    return idx;
  };

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(keep_dim, keep_dim);
  for (long i = 0; i < keep_dim; ++i)
    for (long j = 0; j < keep_dim; ++j) {
      Complex acc_ij = 0.0;
      for (long tr = 0; tr < traced_dim; ++tr)
        acc_ij += rho(full_index(i, tr), full_index(j, tr));
      out(i, j) = acc_ij;
    }
  return out;
}

RegionalMoments FockOracle::regional_moments(const Eigen::VectorXcd& psi,
                                             const Region& region) const {
  if (region.empty()) throw std::invalid_argument("empty region");
  region.check_bounds(fl_.spec.n_sites);
  const int m = region.size();

  std::vector<Eigen::VectorXcd> w(m), u(m);
  for (int x = 0; x < m; ++x) {
    w[x] = apply_site_op(psi, region.sites()[x], phi_op_);
    u[x] = apply_site_op(psi, region.sites()[x], pi_op_);
  }

  RegionalMoments out;
  out.first.resize(2 * m);
  out.second.resize(2 * m, 2 * m);
  for (int x = 0; x < m; ++x) {
    out.first[x] = psi.dot(w[x]).real();
    out.first[m + x] = psi.dot(u[x]).real();
  }
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      out.second(x, y) = w[x].dot(w[y]).real();
      out.second(m + x, m + y) = u[x].dot(u[y]).real();
      out.second(x, m + y) = w[x].dot(u[y]).real();
      out.second(m + y, x) = out.second(x, m + y);
    }
  out.second = 0.5 * (out.second + out.second.transpose()).eval();
  return out;
}

double FockOracle::commutator_defect() const {
  const int d = fl_.cutoff;
  const Eigen::MatrixXcd comm =
      phi_op_ * pi_op_ - pi_op_ * phi_op_ -
      Complex(0.0, 1.0) * Eigen::MatrixXcd::Identity(d, d);
  // the top two ladder levels are corrupted by truncation, by construction
  return comm.topLeftCorner(d - 2, d - 2).cwiseAbs().maxCoeff();
}

GridPropagator::GridPropagator(double omega, double box_halfwidth,
                               double spacing)
    : omega_(omega), h_(spacing) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
  if (!(spacing > 0.0) || !(box_halfwidth > spacing))
    throw std::invalid_argument("bad grid geometry");
  const int half = static_cast<int>(std::ceil(box_halfwidth / spacing));
  const int n = 2 * half + 1;
  points_.resize(n);
  for (int i = 0; i < n; ++i) points_[i] = (i - half) * spacing;

  // spectral kinetic term: exact k^2/2 multiplier on the periodic grid
  LatticeSpec grid_spec{n, spacing, 0.0, Dispersion::ContinuumSampled};
  Eigen::MatrixXd h = 0.5 * quadratic_form_matrix(grid_spec);
  for (int i = 0; i < n; ++i)
    h(i, i) += 0.5 * omega * omega * points_[i] * points_[i];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  evecs_ = es.eigenvectors();
  evals_ = es.eigenvalues();
}

Eigen::MatrixXcd GridPropagator::kernel(double t, double window_halfwidth,
                                        Eigen::VectorXd* window_points) const {
  std::vector<int> win;
  for (int i = 0; i < points_.size(); ++i)
    if (std::abs(points_[i]) <= window_halfwidth + 1e-12) win.push_back(i);
  const int m = static_cast<int>(win.size());
  if (window_points) {
    window_points->resize(m);
    for (int i = 0; i < m; ++i) (*window_points)[i] = points_[win[i]];
  }

  Eigen::MatrixXd rows(m, evecs_.cols());
  for (int i = 0; i < m; ++i) rows.row(i) = evecs_.row(win[i]);
  Eigen::MatrixXcd phased(m, evecs_.cols());
  for (long j = 0; j < evals_.size(); ++j)
    phased.col(j) = rows.col(j) * std::exp(Complex(0.0, -evals_[j] * t));
  return (phased * rows.transpose().cast<Complex>()) / h_;
}

Eigen::VectorXcd GridPropagator::apply(const Eigen::VectorXcd& psi,
                                       double t) const {
  if (psi.size() != points_.size())
    throw std::invalid_argument("state dimension != grid size");
  const Eigen::VectorXd re = evecs_.transpose() * psi.real();
  const Eigen::VectorXd im = evecs_.transpose() * psi.imag();
  Eigen::VectorXcd z(psi.size());
  for (long j = 0; j < evals_.size(); ++j)
    z[j] = std::exp(Complex(0.0, -evals_[j] * t)) * Complex(re[j], im[j]);
  Eigen::VectorXcd out(psi.size());
  out.real() = evecs_ * z.real();
  out.imag() = evecs_ * z.imag();
  return out;
}

NormalizationReport normalization_check(const FockLattice& fl,
                                        const std::vector<double>& t_grid,
                                        const PropagatorGridConfig& grid) {
  fl.validate();
  if (fl.spec.n_sites != 1)
    throw std::invalid_argument("normalization_check is single-mode");
  if (t_grid.empty()) throw std::invalid_argument("empty t grid");
  const double omega = dispersion_omega(fl.spec, 0);
  if (omega <= 0.0) throw MasslessVacuumError("single mode needs m > 0");

  double t_max = 0.0;
  for (double t : t_grid) {
    if (!(t > 0.0) || std::sin(omega * t) <= kCausticEpsilon)
      throw CausticError("t = " + std::to_string(t) +
                         " is not strictly inside (0, pi/omega)");
    t_max = std::max(t_max, t);
  }

  const double h = grid.grid_spacing;
  const double wh = grid.window_halfwidth;
  double box = grid.box_halfwidth;
  if (box <= 0.0) {
    // either confine every grid mode below the potential at the edge or
    // make the box too wide for wrap-arounds to return in time
    const double nyquist = std::numbers::pi / h;
    const double confine = std::max(wh + 4.0, 1.05 * nyquist / omega);
    const double outrun = wh + 4.0 + 0.75 * nyquist * t_max;
    box = std::min(confine, outrun);
  }
  const GridPropagator prop(omega, box, h);

  const double t_ref = t_grid[t_grid.size() / 2];
  const auto reference_phase = [&](double t, const Eigen::VectorXd& pts) {
    const double wG = kernel_mode_weight(KernelRole::G, omega, t);
    const double wg = kernel_mode_weight(KernelRole::g, omega, t);
    const int m = static_cast<int>(pts.size());
    Eigen::MatrixXcd out(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double action = 0.5 * wG * (pts[i] * pts[i] + pts[j] * pts[j]) -
                              wg * pts[i] * pts[j];
        out(i, j) = std::exp(Complex(0.0, action)) /
                    std::sqrt(std::sin(omega * t));
      }
    return out;
  };

  // fit the overall constant at the reference time
  Eigen::VectorXd pts;
  const Eigen::MatrixXcd k_ref = prop.kernel(t_ref, wh, &pts);
  const Eigen::MatrixXcd base = reference_phase(t_ref, pts);
  Complex num = 0.0;
  double den = 0.0;
  for (int i = 0; i < base.rows(); ++i)
    for (int j = 0; j < base.cols(); ++j) {
      num += std::conj(base(i, j)) * k_ref(i, j);
      den += std::norm(base(i, j));
    }
  const Complex constant = num / den;

  NormalizationReport report;
  report.reference_t = t_ref;
  report.max_rel_deviation = 0.0;
  report.max_rms_rel_deviation = 0.0;
  report.max_modulus_rel_deviation = 0.0;
  for (double t : t_grid) {
    const Eigen::MatrixXcd oracle = prop.kernel(t, wh, nullptr);
    const Eigen::MatrixXcd ref = constant * reference_phase(t, pts);
    const double scale = oracle.cwiseAbs().maxCoeff();
    NormalizationRow row;
    row.t = t;
    row.max_rel_deviation = (oracle - ref).cwiseAbs().maxCoeff() / scale;
    row.rms_rel_deviation = (oracle - ref).norm() / oracle.norm();
    row.oracle_modulus = oracle.cwiseAbs().mean();
    row.reference_modulus = std::abs(constant) / std::sqrt(std::sin(omega * t));
    row.modulus_rel_deviation =
        std::abs(row.oracle_modulus - row.reference_modulus) /
        row.oracle_modulus;
    report.max_rel_deviation =
        std::max(report.max_rel_deviation, row.max_rel_deviation);
    report.max_rms_rel_deviation =
        std::max(report.max_rms_rel_deviation, row.rms_rel_deviation);
    report.max_modulus_rel_deviation =
        std::max(report.max_modulus_rel_deviation, row.modulus_rel_deviation);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace lcr
