#pragma once

#include <Eigen/Dense>
#include <random>

namespace lcr {

// Phase-space ordering is (q_1..q_m, p_1..p_m) throughout; the canonical
// form is Omega = [[0, I], [-I, 0]] and pure states have symplectic
// eigenvalue 1/2.
Eigen::MatrixXd symplectic_form(int modes);

// max-norm of S^T Omega S - Omega.
double symplecticity_residual(const Eigen::MatrixXd& S);

// Symplectic spectrum of a positive definite covariance matrix, descending.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov);

// Williamson normal form cov = S * diag(nu, nu) * S^T with S symplectic.
struct WilliamsonForm {
  Eigen::MatrixXd S;
  Eigen::VectorXd nu;  // ascending
};
WilliamsonForm williamson(const Eigen::MatrixXd& cov);

// Haar-ish random symplectic on `modes` modes: orthogonal-symplectic x
// squeeze x orthogonal-symplectic, with squeeze parameters drawn uniformly
// from [-squeeze, squeeze].
Eigen::MatrixXd random_symplectic(int modes, std::mt19937_64& rng,
                                  double squeeze = 0.8);

// diag(e^r, e^-r) acting on the given mode of an m-mode block.
Eigen::MatrixXd single_mode_squeeze(int modes, int mode, double r);

}  // namespace lcr
