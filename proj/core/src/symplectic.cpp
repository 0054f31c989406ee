#include "lcr/symplectic.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace lcr {

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  omega.topRightCorner(modes, modes) = Eigen::MatrixXd::Identity(modes, modes);
  omega.bottomLeftCorner(modes, modes) =
      -Eigen::MatrixXd::Identity(modes, modes);
  return omega;
}

double symplecticity_residual(const Eigen::MatrixXd& S) {
  if (S.rows() != S.cols() || S.rows() % 2 != 0)
    throw std::invalid_argument("symplectic matrices have even square shape");
  const Eigen::MatrixXd omega = symplectic_form(static_cast<int>(S.rows()) / 2);
  return (S.transpose() * omega * S - omega).cwiseAbs().maxCoeff();
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  const int m = static_cast<int>(cov.rows()) / 2;
  if (cov.rows() != cov.cols() || cov.rows() != 2 * m)
    throw std::invalid_argument("covariance must be 2m x 2m");
  // eigenvalues of L^T Omega L come in +-i nu pairs, L = chol(cov)
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("covariance not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::MatrixXd K = L.transpose() * symplectic_form(m) * L;
  const Eigen::MatrixXcd H =
      std::complex<double>(0.0, 1.0) * K.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H,
                                                     Eigen::EigenvaluesOnly);
  Eigen::VectorXd nu(m);
  for (int j = 0; j < m; ++j) nu[j] = es.eigenvalues()[2 * m - 1 - j];
  return nu;
}

WilliamsonForm williamson(const Eigen::MatrixXd& cov) {
  const int m = static_cast<int>(cov.rows()) / 2;
  if (cov.rows() != cov.cols() || cov.rows() != 2 * m)
    throw std::invalid_argument("covariance must be 2m x 2m");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> root_solver(cov);
  if (root_solver.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("covariance not positive definite");
  const Eigen::MatrixXd sqrt_cov = root_solver.operatorSqrt();

  const Eigen::MatrixXd W = sqrt_cov * symplectic_form(m) * sqrt_cov;
  const Eigen::MatrixXcd H =
      std::complex<double>(0.0, 1.0) * W.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);

  // For the eigenpair H w = nu w with w = (x + i y)/|..|, the real plane
  // (x, y) satisfies W x = nu y, W y = -nu x; collecting Q = [y | x] over
  // the positive half-spectrum gives Q^T W Q = [[0, L], [-L, 0]].
  WilliamsonForm out;
  out.nu.resize(m);
  Eigen::MatrixXd Q(2 * m, 2 * m);
  for (int j = 0; j < m; ++j) {
    const double nu = es.eigenvalues()[m + j];  // ascending positive half
    const Eigen::VectorXcd w = es.eigenvectors().col(m + j);
    out.nu[j] = nu;
    Q.col(j) = std::sqrt(2.0) * w.imag();
    Q.col(m + j) = std::sqrt(2.0) * w.real();
  }
  Eigen::VectorXd scale(2 * m);
  for (int j = 0; j < m; ++j)
    scale[j] = scale[m + j] = 1.0 / std::sqrt(out.nu[j]);
  out.S = sqrt_cov * Q * scale.asDiagonal();
  return out;
}

Eigen::MatrixXd random_symplectic(int modes, std::mt19937_64& rng,
                                  double squeeze) {
  const auto random_orthogonal_symplectic = [&]() {
    // [[X, Y], [-Y, X]] with X + iY unitary
    Eigen::MatrixXcd ginibre(modes, modes);
    std::normal_distribution<double> gauss;
    for (int r = 0; r < modes; ++r)
      for (int c = 0; c < modes; ++c)
        ginibre(r, c) = std::complex<double>(gauss(rng), gauss(rng));
    const Eigen::MatrixXcd u =
        Eigen::HouseholderQR<Eigen::MatrixXcd>(ginibre).householderQ();
    Eigen::MatrixXd k(2 * modes, 2 * modes);
    k.topLeftCorner(modes, modes) = u.real();
    k.topRightCorner(modes, modes) = u.imag();
    k.bottomLeftCorner(modes, modes) = -u.imag();
    k.bottomRightCorner(modes, modes) = u.real();
    return k;
  };

  std::uniform_real_distribution<double> uni(-squeeze, squeeze);
  Eigen::VectorXd z(2 * modes);
  for (int j = 0; j < modes; ++j) {
    const double r = uni(rng);
    z[j] = std::exp(r);
    z[modes + j] = std::exp(-r);
  }
  return random_orthogonal_symplectic() * z.asDiagonal() *
         random_orthogonal_symplectic();
}

Eigen::MatrixXd single_mode_squeeze(int modes, int mode, double r) {
  if (mode < 0 || mode >= modes) throw std::invalid_argument("mode out of range");
  Eigen::VectorXd z = Eigen::VectorXd::Ones(2 * modes);
  z[mode] = std::exp(r);
  z[modes + mode] = std::exp(-r);
  return z.asDiagonal();
}

}  // namespace lcr
