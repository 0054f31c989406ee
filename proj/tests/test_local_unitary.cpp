#include <doctest.h>

#include <complex>
#include <random>

#include "lcr/errors.hpp"
#include "lcr/local_unitary.hpp"

using namespace lcr;
using Complex = std::complex<double>;

namespace {

Eigen::MatrixXcd random_ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  return m;
}

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  return Eigen::HouseholderQR<Eigen::MatrixXcd>(random_ginibre(n, n, rng))
      .householderQ();
}

// rank-r amplitude matrix with singular values bounded away from zero
Eigen::MatrixXcd random_amplitude(int m, int n, int rank,
                                  std::mt19937_64& rng) {
  const Eigen::MatrixXcd left =
      Eigen::HouseholderQR<Eigen::MatrixXcd>(random_ginibre(m, rank, rng))
          .householderQ() *
      Eigen::MatrixXcd::Identity(m, rank);
  const Eigen::MatrixXcd right =
      Eigen::HouseholderQR<Eigen::MatrixXcd>(random_ginibre(n, rank, rng))
          .householderQ() *
      Eigen::MatrixXcd::Identity(n, rank);
  std::uniform_real_distribution<double> sigma(0.3, 1.5);
  Eigen::VectorXcd s(rank);
  for (int i = 0; i < rank; ++i) s[i] = sigma(rng);
  return left * s.asDiagonal() * right.adjoint();
}

}  // namespace

TEST_SUITE_BEGIN("local_unitary");

TEST_CASE("gram equality check") {
  std::mt19937_64 rng(41);
  SUBCASE("equal matrices") {
    const auto f = random_amplitude(3, 5, 2, rng);
    const auto check = check_rdm_equal(f, f, 1e-12);
    CHECK(check.equal);
    CHECK(check.residual == 0.0);
  }
  SUBCASE("unitary rotations preserve the gram") {
    const auto f1 = random_amplitude(4, 6, 3, rng);
    const Eigen::MatrixXcd f2 = random_unitary(4, rng) * f1;
    CHECK(check_rdm_equal(f1, f2, 1e-12).equal);
  }
  SUBCASE("hand example with residual one half") {
    Eigen::MatrixXcd f1 = Eigen::MatrixXcd::Identity(2, 2) / std::sqrt(2.0);
    Eigen::MatrixXcd f2 = Eigen::MatrixXcd::Zero(2, 2);
    f2(0, 0) = 1.0;
    const auto check = check_rdm_equal(f1, f2, 1e-12);
    CHECK_FALSE(check.equal);
    CHECK(check.residual == doctest::Approx(0.5));
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(check_rdm_equal(Eigen::MatrixXcd::Identity(2, 2),
                                    Eigen::MatrixXcd::Identity(3, 3), 1e-12),
                    std::invalid_argument);
  }
}

TEST_CASE("identity pair factors to the identity action") {
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(3, 3);
  const auto out = find_local_unitary(eye, eye, 1e-10);
  CHECK(out.residual_unitarity <= 1e-12);
  CHECK(out.residual_equation <= 1e-12);
  CHECK(out.rank == 3);
  CHECK(out.path_taken == CompletionPath::FullRank);
}

TEST_CASE("the 2x1 column swap follows the extension recipe") {
  Eigen::MatrixXcd f1(2, 1), f2(2, 1);
  f1 << 1.0, 0.0;
  f2 << 0.0, 1.0;
  const auto out = find_local_unitary(f1, f2, 1e-10);
  CHECK(out.path_taken == CompletionPath::RankDeficient);
  CHECK(out.rank == 1);
  CHECK(out.residual_unitarity <= 1e-12);
  CHECK(out.residual_equation <= 1e-12);
  CHECK(std::abs(out.unitary(0, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(out.unitary(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(out.unitary(0, 0)) <= 1e-12);
}

TEST_CASE("soundness over random instances in every rank regime") {
  std::mt19937_64 rng(97);
  std::uniform_int_distribution<int> dim(1, 16);
  for (int trial = 0; trial < 120; ++trial) {
    const int m = dim(rng);
    const int n = dim(rng);
    const int max_rank = std::min(m, n);
    const int rank = 1 + static_cast<int>(rng() % max_rank);
    const auto f1 = random_amplitude(m, n, rank, rng);
    const Eigen::MatrixXcd f2 = random_unitary(m, rng) * f1;
    const auto out = find_local_unitary(f1, f2, 1e-9);
    CHECK(out.residual_unitarity <= 1e-10);
    CHECK(out.residual_equation <= 1e-10);
    CHECK(out.rank == rank);
    CHECK(out.path_taken == (rank == m ? CompletionPath::FullRank
                                       : CompletionPath::RankDeficient));
  }
}

TEST_CASE("gauge freedom: different pivot orders still solve the problem") {
  std::mt19937_64 rng(7);
  const auto f1 = random_amplitude(6, 4, 3, rng);
  const Eigen::MatrixXcd f2 = random_unitary(6, rng) * f1;

  // permuting the A-basis permutes the pivot choice but not the answer
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(4);
  perm.setIdentity();
  std::shuffle(perm.indices().data(), perm.indices().data() + 4, rng);

  const auto out_a = find_local_unitary(f1, f2, 1e-9);
  const auto out_b = find_local_unitary(f1 * perm, f2 * perm, 1e-9);
  CHECK(out_a.residual_equation <= 1e-10);
  CHECK(out_b.residual_equation <= 1e-10);
  CHECK((f2 - out_b.unitary * f1).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("extended matrices satisfy the extended gram equality") {
  std::mt19937_64 rng(13);
  const int m = 5, n = 7, rank = 2;
  const auto f1 = random_amplitude(m, n, rank, rng);
  const Eigen::MatrixXcd f2 = random_unitary(m, rng) * f1;

  const auto extend = [&](const Eigen::MatrixXcd& f) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f, Eigen::ComputeFullU);
    Eigen::MatrixXcd out(m, n + m - rank);
    out.leftCols(n) = f;
    out.rightCols(m - rank) = svd.matrixU().rightCols(m - rank);
    return out;
  };
  const auto g1 = extend(f1), g2 = extend(f2);
  CHECK((g1.adjoint() * g1 - g2.adjoint() * g2).cwiseAbs().maxCoeff() <=
        1e-12);
}

TEST_CASE("gram mismatch is rejected") {
  Eigen::MatrixXcd f1 = Eigen::MatrixXcd::Identity(2, 2) / std::sqrt(2.0);
  Eigen::MatrixXcd f2 = Eigen::MatrixXcd::Zero(2, 2);
  f2(0, 0) = 1.0;
  CHECK_THROWS_AS(find_local_unitary(f1, f2, 1e-10), RdmMismatch);
}

TEST_CASE("singular values inside the decision band are rejected") {
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(2, 2);
  f(0, 0) = 1.0;
  f(1, 1) = 5e-9;  // relative 5e-9 sits inside [1e-9, 1e-7] at tol 1e-8
  CHECK_THROWS_AS(find_local_unitary(f, f, 1e-8), RankInstability);
}

TEST_CASE("fock embedding") {
  SUBCASE("identity embeds to the identity") {
    const auto op = embed_in_fock(Eigen::MatrixXcd::Identity(3, 3), 3, 4);
    CHECK((op - Eigen::MatrixXcd::Identity(12, 12)).cwiseAbs().maxCoeff() ==
          0.0);
  }
  SUBCASE("swap on a 2x2 bipartite toy") {
    Eigen::MatrixXcd swap(2, 2);
    swap << 0, 1, 1, 0;
    const auto op = embed_in_fock(swap, 2, 2);
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(4);
    e0[0] = 1.0;
    const Eigen::VectorXcd mapped = op * e0;
    CHECK(std::abs(mapped[2] - Complex(1.0, 0.0)) <= 1e-15);
    CHECK(mapped.cwiseAbs().sum() == doctest::Approx(1.0));
  }
  SUBCASE("embedded completion maps state one to state two") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
      const int m = 4, n = 8;  // total dimension 32 <= 64
      Eigen::MatrixXcd f1 = random_ginibre(m, n, rng);
      f1 /= f1.norm();
      const auto ua = random_unitary(m, rng);
      const Eigen::MatrixXcd f2 = ua * f1;

      const auto out = find_local_unitary(f1, f2, 1e-9);
      const auto op = embed_in_fock(out.unitary, m, n);

      // row-major flattening matches the a-major product basis
      Eigen::VectorXcd psi1(m * n), psi2(m * n);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) {
          psi1[r * n + c] = f1(r, c);
          psi2[r * n + c] = f2(r, c);
        }
      const Eigen::VectorXcd mapped = op * psi1;
      // align the global phase before comparing
      Complex phase = 1.0;
      for (int i = 0; i < m * n; ++i)
        if (std::abs(psi2[i]) > 0.1) {
          phase = psi2[i] / mapped[i];
          break;
        }
      phase /= std::abs(phase);
      CHECK((phase * mapped - psi2).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(embed_in_fock(Eigen::MatrixXcd::Identity(3, 3), 2, 4),
                    std::invalid_argument);
  }
}

TEST_SUITE_END();
