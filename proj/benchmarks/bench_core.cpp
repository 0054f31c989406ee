#include <benchmark/benchmark.h>

#include <random>

#include "lcr/gaussian.hpp"
#include "lcr/harness.hpp"
#include "lcr/kernels.hpp"
#include "lcr/local_unitary.hpp"
#include "lcr/superposition.hpp"
#include "lcr/symplectic.hpp"

namespace {

lcr::LatticeSpec spec_of(int n, double mass = 1.0) {
  return lcr::LatticeSpec{n, 1.0, mass, lcr::Dispersion::Lattice};
}

void BM_BuildKernel(benchmark::State& state) {
  const auto spec = spec_of(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto k = lcr::build_kernel(spec, lcr::KernelRole::gInv, 7.0);
    benchmark::DoNotOptimize(k.entries.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildKernel)->RangeMultiplier(4)->Range(64, 1024)->Complexity();

void BM_VerifyIdentity(benchmark::State& state) {
  const auto spec = spec_of(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        lcr::verify_identity(spec, lcr::KernelIdentity::gG1, 0.7, 1e-4));
}
BENCHMARK(BM_VerifyIdentity)->Arg(64)->Arg(256);

void BM_Evolve(benchmark::State& state) {
  const auto spec = spec_of(static_cast<int>(state.range(0)), 0.2);
  const auto vac = lcr::vacuum(spec);
  for (auto _ : state) {
    auto moved = lcr::evolve(vac, 10.0);
    benchmark::DoNotOptimize(moved.covariance.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Evolve)->RangeMultiplier(2)->Range(32, 256)->Complexity();

void BM_CausalityScenario(benchmark::State& state) {
  lcr::ScenarioConfig cfg;
  cfg.spec = spec_of(128, 0.2);
  cfg.region_a = lcr::Region::interval(60, 8, 128);
  cfg.time = 10.0;
  cfg.perturbation.kind = lcr::PerturbationKind::Displacement;
  cfg.perturbation.dphi = Eigen::VectorXd::Ones(8);
  cfg.perturbation.dpi = Eigen::VectorXd::Zero(8);
  cfg.margins = {10, 20};
  for (auto _ : state) {
    auto report = lcr::run_causality_check(cfg);
    benchmark::DoNotOptimize(report.max_b_deviation.data());
  }
}
BENCHMARK(BM_CausalityScenario);

void BM_FindLocalGaussianUnitary(benchmark::State& state) {
  const auto spec = spec_of(16);
  const auto vac = lcr::vacuum(spec);
  const auto region = lcr::Region::interval(4, 6, 16);
  std::mt19937_64 rng(3);
  const auto kicked = lcr::apply_local_symplectic(
      vac, region, lcr::random_symplectic(6, rng, 0.6));
  for (auto _ : state) {
    auto op = lcr::find_local_gaussian_unitary(vac, kicked, region, 1e-8);
    benchmark::DoNotOptimize(op.symplectic.data());
  }
}
BENCHMARK(BM_FindLocalGaussianUnitary);

void BM_FindLocalUnitary(benchmark::State& state) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  const int m = 12, n = 16;
  Eigen::MatrixXcd f1(m, n), u(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c)
      f1(r, c) = std::complex<double>(gauss(rng), gauss(rng));
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c)
      u(r, c) = std::complex<double>(gauss(rng), gauss(rng));
  const Eigen::MatrixXcd q =
      Eigen::HouseholderQR<Eigen::MatrixXcd>(u).householderQ();
  const Eigen::MatrixXcd f2 = q * f1;
  for (auto _ : state) {
    auto out = lcr::find_local_unitary(f1, f2, 1e-9);
    benchmark::DoNotOptimize(out.unitary.data());
  }
}
BENCHMARK(BM_FindLocalUnitary);

void BM_VacuumWitness(benchmark::State& state) {
  const auto spec = spec_of(16);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(16);
  d[7] = d[8] = 1.0;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(16);
  const auto cat = lcr::CoherentSuperposition::make(
      spec, {lcr::CoherentBranch{1.0, d, zero},
             lcr::CoherentBranch{1.0, -d, zero}});
  const auto region = lcr::Region::interval(7, 2, 16).complement(16);
  for (auto _ : state)
    benchmark::DoNotOptimize(lcr::vacuum_witness(cat, region));
}
BENCHMARK(BM_VacuumWitness);

}  // namespace

BENCHMARK_MAIN();
