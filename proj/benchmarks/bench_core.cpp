#include <benchmark/benchmark.h>

#include "adaptive_mc/lrebn.hpp"
#include "adaptive_mc/sampling.hpp"
#include "adaptive_mc/synthetic.hpp"

namespace amc = adaptive_mc;

static void BM_Orthonormalize(benchmark::State& state) {
  const auto m = state.range(0);
  const auto k = state.range(1);
  amc::Rng rng(1, amc::Stream::kVerify);
  const amc::DenseMatrix a = rng.gaussian_matrix(m, k);
  for (auto _ : state) benchmark::DoNotOptimize(amc::orthonormalize_columns(a));
}
BENCHMARK(BM_Orthonormalize)->Args({200, 4})->Args({2000, 8})->Args({2000, 32});

static void BM_RestrictedResidual(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  amc::Rng rng(2, amc::Stream::kVerify);
  const auto basis = amc::orthonormalize_columns(rng.gaussian_matrix(static_cast<Eigen::Index>(m), 8));
  const auto omega = amc::sample_uniform_subset(m, d, rng);
  const amc::Vector y = rng.gaussian_vector(static_cast<Eigen::Index>(d));
  for (auto _ : state) benchmark::DoNotOptimize(amc::restricted_residual_norm(basis, omega, y));
}
BENCHMARK(BM_RestrictedResidual)->Args({2000, 200})->Args({2000, 1000})->Args({20000, 2000});

static void BM_RunLrebn(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const double eps = static_cast<double>(state.range(1)) / 1000.0;
  const auto inst = amc::generate_instance(m, 200, 4, eps, amc::Incoherent{}, amc::NoiseMode::kSphere, 3);
  amc::LrebnConfig cfg;
  cfg.epsilon = eps;
  cfg.r = 4;
  cfg.mu_upper = amc::coherence(inst.true_basis);
  for (auto _ : state) {
    amc::ObservationOracle oracle(inst.M);
    benchmark::DoNotOptimize(amc::run_lrebn(oracle, cfg));
  }
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_RunLrebn)->Args({200, 0})->Args({200, 20})->Args({5000, 0})->Unit(benchmark::kMillisecond);

static void BM_SampleSubset(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  amc::Rng rng(4, amc::Stream::kOmega);
  for (auto _ : state) benchmark::DoNotOptimize(amc::sample_uniform_subset(m, m / 10, rng));
}
BENCHMARK(BM_SampleSubset)->Arg(1000)->Arg(100000);
BENCHMARK_MAIN();
