#include "lcr/local_unitary.hpp"

#include <stdexcept>

#include "lcr/errors.hpp"

namespace lcr {

RdmCheck check_rdm_equal(const Eigen::MatrixXcd& f1, const Eigen::MatrixXcd& f2,
                         double tol) {
  if (f1.rows() != f2.rows() || f1.cols() != f2.cols())
    throw std::invalid_argument("amplitude matrices must share a shape");
  if (f1.rows() < 1 || f1.cols() < 1)
    throw std::invalid_argument("amplitude matrices must be non-empty");
  const double residual =
      (f1.adjoint() * f1 - f2.adjoint() * f2).cwiseAbs().maxCoeff();
  return RdmCheck{residual <= tol, residual};
}

std::string to_string(CompletionPath path) {
  return path == CompletionPath::FullRank ? "full_rank" : "rank_deficient";
}

Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

namespace {

int stable_rank(const Eigen::VectorXd& sigma, double tol) {
  const double largest = sigma.size() ? sigma[0] : 0.0;
  if (largest <= 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sigma.size(); ++i) {
    const double rel = sigma[i] / largest;
    if (rel > 10.0 * tol) {
      ++rank;
    } else if (rel >= tol / 10.0) {
      throw RankInstability("relative singular value " + std::to_string(rel) +
                            " sits inside the rank-decision band");
    }
  }
  return rank;
}

// Columns spanning the orthogonal complement of the column space, taken
// from the tail of the left singular basis.
Eigen::MatrixXcd column_space_complement(const Eigen::JacobiSVD<Eigen::MatrixXcd>& svd,
                                         int rank, int m_rows) {
  return svd.matrixU().rightCols(m_rows - rank);
}

}  // namespace

UnitaryCompletion find_local_unitary(const Eigen::MatrixXcd& f1,
                                     const Eigen::MatrixXcd& f2, double tol) {
  const RdmCheck check = check_rdm_equal(f1, f2, tol);
  if (!check.equal)
    throw RdmMismatch("f1'f1 != f2'f2 (residual " +
                      std::to_string(check.residual) + "); no unitary exists");

  const int m_rows = static_cast<int>(f1.rows());

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd1(f1, Eigen::ComputeFullU);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd2(f2, Eigen::ComputeFullU);
  const int rank1 = stable_rank(svd1.singularValues(), tol);
  const int rank2 = stable_rank(svd2.singularValues(), tol);
  if (rank1 != rank2)
    throw RankInstability("rank(f1) = " + std::to_string(rank1) +
                          " != rank(f2) = " + std::to_string(rank2) +
                          " despite Gram equality");
  const int rank = rank2;

  Eigen::MatrixXcd g1 = f1;
  Eigen::MatrixXcd g2 = f2;
  CompletionPath path = CompletionPath::FullRank;
  if (rank < m_rows) {
    // pad each matrix with an orthonormal basis of its own left null
    // space; the extended Grams stay equal and the rank becomes M
    path = CompletionPath::RankDeficient;
    const int extra = m_rows - rank;
    g1.conservativeResize(Eigen::NoChange, f1.cols() + extra);
    g2.conservativeResize(Eigen::NoChange, f2.cols() + extra);
    g1.rightCols(extra) = column_space_complement(svd1, rank, m_rows);
    g2.rightCols(extra) = column_space_complement(svd2, rank, m_rows);
  }

  // pivot columns chosen from f2 (well, its extension), reused for f1
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(g2);
  const auto perm = qr.colsPermutation().indices();
  Eigen::MatrixXcd big1(m_rows, m_rows), big2(m_rows, m_rows);
  for (int c = 0; c < m_rows; ++c) {
    big1.col(c) = g1.col(perm[c]);
    big2.col(c) = g2.col(perm[c]);
  }

  // U = (F2')^{-1} F1' via a solve, then the polar step
  const Eigen::MatrixXcd u0 =
      big2.adjoint().partialPivLu().solve(big1.adjoint());
  UnitaryCompletion out;
  out.unitary = polar_unitary(u0);
  out.rank = rank;
  out.path_taken = path;
  out.residual_unitarity =
      (out.unitary.adjoint() * out.unitary -
       Eigen::MatrixXcd::Identity(m_rows, m_rows))
          .cwiseAbs()
          .maxCoeff();
  out.residual_equation = (f2 - out.unitary * f1).cwiseAbs().maxCoeff();
  return out;
}

Eigen::MatrixXcd embed_in_fock(const Eigen::MatrixXcd& U, int a_dim,
                               int A_dim) {
  if (U.rows() != a_dim || U.cols() != a_dim)
    throw std::invalid_argument("unitary dimension != a-basis dimension");
  if (A_dim < 1) throw std::invalid_argument("A-basis dimension < 1");
  Eigen::MatrixXcd out =
      Eigen::MatrixXcd::Zero(a_dim * A_dim, a_dim * A_dim);
  for (int m = 0; m < a_dim; ++m)
    for (int mp = 0; mp < a_dim; ++mp)
      for (int n = 0; n < A_dim; ++n)
        out(m * A_dim + n, mp * A_dim + n) = U(m, mp);
  return out;
}

}  // namespace lcr
