#pragma once

#include <Eigen/Dense>
#include <string>

namespace lcr {

// Amplitude matrices f_i(m, n) relating a-region rows to A-region columns
// of a bipartite pure state |psi_i> = sum f_i(m,n) |a_m>|A_n>. Equal
// A-side reduced density matrices is exactly f1'f1 = f2'f2.
struct RdmCheck {
  bool equal;
  double residual;  // max-norm of f1'f1 - f2'f2
};

RdmCheck check_rdm_equal(const Eigen::MatrixXcd& f1, const Eigen::MatrixXcd& f2,
                         double tol);

enum class CompletionPath { FullRank, RankDeficient };

std::string to_string(CompletionPath path);

struct UnitaryCompletion {
  Eigen::MatrixXcd unitary;  // M x M with f2 = U f1
  int rank;
  CompletionPath path_taken;
  double residual_unitarity;  // max-norm of U'U - I
  double residual_equation;   // max-norm of f2 - U f1
};

// Constructs U with f2 = U f1 from the Gram equality, selecting pivot
// columns from f2, extending rank-deficient inputs with orthonormal
// complements of their column spaces, and finishing with a polar
// projection. Throws RdmMismatch when check_rdm_equal fails and
// RankInstability when singular values sit inside the undecidable band
// [tol/10, 10 tol] (relative to the largest).
UnitaryCompletion find_local_unitary(const Eigen::MatrixXcd& f1,
                                     const Eigen::MatrixXcd& f2, double tol);

// U on the a-factor tensored with the identity on the A-factor, in the
// lexicographic product basis (a-index major): kron(U, I_A).
Eigen::MatrixXcd embed_in_fock(const Eigen::MatrixXcd& U, int a_dim,
                               int A_dim);

// Nearest unitary in Frobenius norm (polar factor).
Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& m);

}  // namespace lcr
