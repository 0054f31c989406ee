#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lcr/errors.hpp"
#include "lcr/gaussian.hpp"
#include "lcr/kernels.hpp"
#include "lcr/symplectic.hpp"

using namespace lcr;
using std::numbers::pi;

namespace {

const LatticeSpec kSingle{1, 1.0, 1.0, Dispersion::Lattice};
const LatticeSpec kPair{2, 1.0, 1.0, Dispersion::Lattice};

Eigen::VectorXd unit_phi(int n, int site, double value = 1.0) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v[site] = value;
  return v;
}

}  // namespace

TEST_SUITE_BEGIN("gaussian");

TEST_CASE("vacuum of a single oscillator") {
  const auto vac = vacuum(kSingle);
  CHECK(vac.mean.cwiseAbs().maxCoeff() == 0.0);
  CHECK(vac.covariance(0, 0) == doctest::Approx(0.5));
  CHECK(vac.covariance(1, 1) == doctest::Approx(0.5));
  CHECK(vac.covariance(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("two-site vacuum matches the two-mode sum") {
  const auto vac = vacuum(kPair);
  const double w0 = 1.0, w1 = std::sqrt(5.0);
  CHECK(vac.covariance(0, 0) ==
        doctest::Approx(0.25 * (1 / w0 + 1 / w1)).epsilon(1e-12));
  CHECK(vac.covariance(2, 2) ==
        doctest::Approx(0.25 * (w0 + w1)).epsilon(1e-12));
  CHECK(vac.covariance(0, 0) == doctest::Approx(0.36180339887).epsilon(1e-9));
}

TEST_CASE("vacuum is pure and satisfies the uncertainty bound") {
  for (int n : {1, 2, 7, 16}) {
    const LatticeSpec spec{n, 0.9, 1.3, Dispersion::Lattice};
    const auto vac = vacuum(spec);
    CHECK(purity_defect(vac) <= 1e-9);
    CHECK(uncertainty_floor(vac.covariance) >= -1e-12);
  }
  CHECK_THROWS_AS(vacuum(LatticeSpec{4, 1.0, 0.0, Dispersion::Lattice}),
                  MasslessVacuumError);
}

TEST_CASE("coherent states displace the vacuum") {
  SUBCASE("zero displacement is the vacuum") {
    const auto c =
        coherent(kPair, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2));
    const auto vac = vacuum(kPair);
    CHECK((c.mean - vac.mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK((c.covariance - vac.covariance).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("single-mode displacement") {
    const auto c = coherent(kSingle, unit_phi(1, 0), Eigen::VectorXd::Zero(1));
    CHECK(c.mean[0] == 1.0);
    CHECK(c.mean[1] == 0.0);
    CHECK(c.covariance(0, 0) == doctest::Approx(0.5));
  }
  SUBCASE("support in a is invisible on the complement") {
    const LatticeSpec spec{12, 1.0, 1.0, Dispersion::Lattice};
    const Region a = Region::interval(3, 3, 12);
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(12);
    phi[3] = 0.7; phi[4] = -0.4; phi[5] = 1.1;
    const auto c = coherent(spec, phi, Eigen::VectorXd::Zero(12));
    const Region comp = a.complement(12);
    CHECK(descriptor_distance(restrict_to(c, comp),
                              restrict_to(vacuum(spec), comp)) <= 1e-12);
  }
  CHECK_THROWS_AS(
      coherent(kPair, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(2)),
      std::invalid_argument);
}

TEST_CASE("propagator structure") {
  SUBCASE("t = 0 is the identity") {
    const auto S = propagator(kPair, 0.0).matrix;
    CHECK((S - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <=
          1e-14);
  }
  SUBCASE("quarter-period rotation of one oscillator") {
    const auto S = propagator(kSingle, pi / 2).matrix;
    CHECK(S(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(S(0, 1) == doctest::Approx(1.0));
    CHECK(S(1, 0) == doctest::Approx(-1.0));
    CHECK(S(1, 1) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("group law and symplecticity") {
    const LatticeSpec spec{16, 0.8, 1.1, Dispersion::Lattice};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(0.1, 3.0);
    for (int trial = 0; trial < 5; ++trial) {
      const double t1 = uni(rng), t2 = uni(rng);
      const auto s1 = propagator(spec, t1).matrix;
      const auto s2 = propagator(spec, t2).matrix;
      const auto s12 = propagator(spec, t1 + t2).matrix;
      CHECK((s12 - s2 * s1).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK(symplecticity_residual(s1) <= 1e-10);
    }
  }
  SUBCASE("no caustic restriction") {
    CHECK_NOTHROW(propagator(kSingle, pi));
    CHECK_NOTHROW(propagator(LatticeSpec{8, 1.0, 0.0, Dispersion::Lattice}, 2.0));
  }
  SUBCASE("off-diagonal block is the commutator kernel") {
    for (auto disp : {Dispersion::Lattice, Dispersion::ContinuumSampled}) {
      const LatticeSpec spec{24, 0.7, 0.6, disp};
      const double t = 1.3;
      const auto S = propagator(spec, t).matrix;
      const auto gi = build_kernel(spec, KernelRole::gInv, t).entries;
      CHECK((S.topRightCorner(24, 24) - spec.spacing * gi)
                .cwiseAbs()
                .maxCoeff() <= 1e-12);
      CHECK(symplecticity_residual(S) <= 1e-10);
    }
  }
}

TEST_CASE("evolution") {
  SUBCASE("vacuum is stationary") {
    const LatticeSpec spec{16, 1.0, 1.0, Dispersion::Lattice};
    const auto vac = vacuum(spec);
    const Region all = Region::interval(0, 16, 16);
    for (double t : {0.3, 7.0, 1000.0})
      CHECK(descriptor_distance(restrict_to(evolve(vac, t), all),
                                restrict_to(vac, all)) <= 1e-10);
  }
  SUBCASE("coherent mean rotates like the classical oscillator") {
    const auto c = coherent(kSingle, unit_phi(1, 0), Eigen::VectorXd::Zero(1));
    const auto moved = evolve(c, pi / 2);
    CHECK(moved.mean[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(moved.mean[1] == doctest::Approx(-1.0));
  }
  SUBCASE("purity is preserved") {
    const LatticeSpec spec{6, 1.0, 0.7, Dispersion::Lattice};
    std::mt19937_64 rng(3);
    GaussianState state = vacuum(spec);
    state = apply_local_symplectic(state, Region::interval(0, 6, 6),
                                   random_symplectic(6, rng));
    const auto later = evolve(state, 1.7);
    CHECK(purity_defect(later) <= 1e-9);
  }
  SUBCASE("short evolutions leave any state almost unchanged") {
    // the small-interval limit behind treating an apparatus kick as
    // instantaneous: deviation shrinks linearly with the interval
    const LatticeSpec spec{10, 1.0, 1.0, Dispersion::Lattice};
    const auto base = coherent(spec, Eigen::VectorXd::Constant(10, 0.3),
                               Eigen::VectorXd::Constant(10, -0.1));
    const Region all = Region::interval(0, 10, 10);
    double previous = 1e9;
    for (double dt : {1e-2, 1e-3, 1e-4}) {
      const double dev = descriptor_distance(restrict_to(evolve(base, dt), all),
                                             restrict_to(base, all));
      CHECK(dev < previous);
      CHECK(dev <= 2.0 * dt);  // generated by a bounded quadratic form
      previous = dev;
    }
  }
}

TEST_CASE("restriction to regions") {
  SUBCASE("full lattice reproduces the state verbatim") {
    const auto vac = vacuum(kPair);
    const auto d = restrict_to(vac, Region::interval(0, 2, 2));
    CHECK((d.mean_block - vac.mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK((d.cov_block - vac.covariance).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("two-site vacuum reduced to one site") {
    const auto d = restrict_to(vacuum(kPair), Region{0});
    const double w0 = 1.0, w1 = std::sqrt(5.0);
    CHECK(d.mean_block.cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.cov_block(0, 0) == doctest::Approx(0.25 * (1 / w0 + 1 / w1)));
    CHECK(d.cov_block(1, 1) == doctest::Approx(0.25 * (w0 + w1)));
    CHECK(d.cov_block(0, 1) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(d.cov_block(1, 1) == doctest::Approx(0.80901699437).epsilon(1e-9));
  }
  SUBCASE("empty region is rejected") {
    CHECK_THROWS_AS(restrict_to(vacuum(kPair), Region{}),
                    std::invalid_argument);
  }
}

TEST_CASE("descriptor distance") {
  const LatticeSpec spec{8, 1.0, 1.0, Dispersion::Lattice};
  const auto vac = vacuum(spec);
  const Region a = Region::interval(2, 2, 8);
  const Region comp = a.complement(8);

  const auto d = restrict_to(vac, a);
  CHECK(descriptor_distance(d, d) == 0.0);

  Eigen::VectorXd dphi = Eigen::VectorXd::Zero(8), dpi = Eigen::VectorXd::Zero(8);
  dphi[2] = 0.9; dpi[3] = -0.4;
  const auto kicked = apply_local_displacement(vac, a, dphi, dpi);
  CHECK(descriptor_distance(restrict_to(kicked, comp),
                            restrict_to(vac, comp)) <= 1e-15);
  CHECK(descriptor_distance(restrict_to(kicked, a), restrict_to(vac, a)) ==
        doctest::Approx(0.9));

  CHECK_THROWS_AS(
      descriptor_distance(restrict_to(vac, a), restrict_to(vac, comp)),
      RegionMismatch);
}

TEST_CASE("local displacement is a Weyl operator") {
  const LatticeSpec spec{10, 1.0, 1.0, Dispersion::Lattice};
  const auto vac = vacuum(spec);
  const Region a = Region::interval(4, 3, 10);

  SUBCASE("zero displacement is the identity") {
    const auto same = apply_local_displacement(
        vac, a, Eigen::VectorXd::Zero(10), Eigen::VectorXd::Zero(10));
    CHECK((same.mean - vac.mean).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("displacing the vacuum builds the coherent state") {
    Eigen::VectorXd dphi = Eigen::VectorXd::Zero(10);
    Eigen::VectorXd dpi = Eigen::VectorXd::Zero(10);
    dphi[5] = 0.3; dpi[6] = -0.8;
    const auto kicked = apply_local_displacement(vac, a, dphi, dpi);
    const auto direct = coherent(spec, dphi, dpi);
    CHECK((kicked.mean - direct.mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK((kicked.covariance - direct.covariance).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("complement block is bitwise untouched") {
    Eigen::VectorXd dphi = Eigen::VectorXd::Zero(10);
    dphi[4] = 1.7;
    const auto kicked =
        apply_local_displacement(vac, a, dphi, Eigen::VectorXd::Zero(10));
    const Region comp = a.complement(10);
    const auto before = restrict_to(vac, comp);
    const auto after = restrict_to(kicked, comp);
    CHECK(before.mean_block == after.mean_block);
    CHECK(before.cov_block == after.cov_block);
  }
  SUBCASE("support outside the region is rejected") {
    Eigen::VectorXd dphi = Eigen::VectorXd::Zero(10);
    dphi[0] = 0.1;
    CHECK_THROWS_AS(
        apply_local_displacement(vac, a, dphi, Eigen::VectorXd::Zero(10)),
        SupportViolation);
  }
}

TEST_CASE("local symplectic operations") {
  const LatticeSpec spec{10, 1.0, 1.0, Dispersion::Lattice};
  const auto vac = vacuum(spec);
  const Region a = Region::interval(2, 2, 10);

  SUBCASE("identity does nothing") {
    const auto same =
        apply_local_symplectic(vac, a, Eigen::MatrixXd::Identity(4, 4));
    CHECK((same.covariance - vac.covariance).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("single-mode squeeze scales the field variance") {
    const double r = 0.45;
    const auto squeezed =
        apply_local_symplectic(vac, Region{3}, single_mode_squeeze(1, 0, r));
    CHECK(squeezed.covariance(3, 3) ==
          doctest::Approx(vac.covariance(3, 3) * std::exp(2 * r)));
  }
  SUBCASE("complement block is bitwise untouched") {
    std::mt19937_64 rng(5);
    const auto T = random_symplectic(2, rng);
    const auto moved = apply_local_symplectic(vac, a, T);
    const Region comp = a.complement(10);
    const auto before = restrict_to(vac, comp);
    const auto after = restrict_to(moved, comp);
    CHECK(before.mean_block == after.mean_block);
    CHECK(before.cov_block == after.cov_block);
  }
  SUBCASE("non-symplectic matrices are rejected") {
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(4, 4);
    bad(0, 0) = 1.5;
    CHECK_THROWS_AS(apply_local_symplectic(vac, a, bad), NonSymplecticInput);
  }
}

TEST_CASE("williamson decomposition") {
  std::mt19937_64 rng(17);
  for (int modes : {1, 2, 4}) {
    // mixed covariance: symplectic conjugation of a thermal-like diagonal
    const auto S = random_symplectic(modes, rng);
    Eigen::VectorXd temps(2 * modes);
    for (int j = 0; j < modes; ++j)
      temps[j] = temps[modes + j] = 0.5 + 0.3 * j;
    const Eigen::MatrixXd V = S * temps.asDiagonal() * S.transpose();
    const auto wf = williamson(V);
    CHECK(symplecticity_residual(wf.S) <= 1e-10);
    Eigen::VectorXd d(2 * modes);
    for (int j = 0; j < modes; ++j) d[j] = d[modes + j] = wf.nu[j];
    CHECK((wf.S * d.asDiagonal() * wf.S.transpose() - V)
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    for (int j = 0; j < modes; ++j)
      CHECK(wf.nu[j] == doctest::Approx(0.5 + 0.3 * j).epsilon(1e-9));
  }
}

TEST_CASE("find_local_gaussian_unitary round trips") {
  const LatticeSpec spec{12, 1.0, 1.0, Dispersion::Lattice};
  const auto vac = vacuum(spec);
  const Region a = Region::interval(2, 5, 12);
  const Region all = Region::interval(0, 12, 12);
  std::mt19937_64 rng(23);

  const auto mapping_residual = [&](const GaussianState& s1,
                                    const GaussianState& s2,
                                    const LocalGaussianOp& op) {
    const auto rebuilt = apply_local_op(s1, a, op);
    return descriptor_distance(restrict_to(rebuilt, all),
                               restrict_to(s2, all));
  };

  SUBCASE("displacement kick") {
    Eigen::VectorXd dphi = Eigen::VectorXd::Zero(12),
                    dpi = Eigen::VectorXd::Zero(12);
    dphi[3] = 0.8; dpi[4] = -0.5;
    const auto s2 = apply_local_displacement(vac, a, dphi, dpi);
    const auto op = find_local_gaussian_unitary(vac, s2, a, 1e-8);
    CHECK(mapping_residual(vac, s2, op) <= 1e-8);
    CHECK(symplecticity_residual(op.symplectic) <= 1e-10);
    // gauge aside, the found operation is the displacement itself
    CHECK((op.symplectic - Eigen::MatrixXd::Identity(10, 10))
              .cwiseAbs()
              .maxCoeff() <= 1e-8);
    CHECK(op.dphi[1] == doctest::Approx(0.8));
  }
  SUBCASE("symplectic kicks, including multi-mode random ones") {
    for (int trial = 0; trial < 4; ++trial) {
      const auto T = random_symplectic(5, rng, 0.7);
      const auto s2 = apply_local_symplectic(vac, a, T);
      const auto op = find_local_gaussian_unitary(vac, s2, a, 1e-8);
      CHECK(mapping_residual(vac, s2, op) <= 1e-8);
      CHECK(symplecticity_residual(op.symplectic) <= 1e-9);
    }
  }
  SUBCASE("combined kick on a non-vacuum base") {
    GaussianState base = evolve(
        coherent(spec, unit_phi(12, 6, 0.4), unit_phi(12, 7, -0.2)), 0.9);
    const auto T = random_symplectic(5, rng, 0.5);
    GaussianState s2 = apply_local_symplectic(base, a, T);
    Eigen::VectorXd dphi = Eigen::VectorXd::Zero(12);
    dphi[2] = -0.6;
    s2 = apply_local_displacement(s2, a, dphi, Eigen::VectorXd::Zero(12));
    const auto op = find_local_gaussian_unitary(base, s2, a, 1e-8);
    CHECK(mapping_residual(base, s2, op) <= 1e-8);
  }
  SUBCASE("identical states give the identity up to gauge") {
    const auto op = find_local_gaussian_unitary(vac, vac, a, 1e-8);
    CHECK(mapping_residual(vac, vac, op) <= 1e-10);
  }
  SUBCASE("mismatched complements are rejected") {
    Eigen::VectorXd dphi = Eigen::VectorXd::Zero(12);
    dphi[0] = 0.5;  // outside region a
    const auto s2 =
        apply_local_displacement(vac, Region{0}, dphi, Eigen::VectorXd::Zero(12));
    CHECK_THROWS_AS(find_local_gaussian_unitary(vac, s2, a, 1e-8),
                    ComplementMismatch);
  }
  SUBCASE("mixed states are rejected") {
    GaussianState mixed = vac;
    mixed.covariance *= 1.3;
    CHECK_THROWS_AS(find_local_gaussian_unitary(mixed, mixed, a, 1e-8),
                    std::invalid_argument);
  }
}

TEST_SUITE_END();
