#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "collapse/algebra.hpp"
#include "collapse/born.hpp"
#include "collapse/combined.hpp"
#include "collapse/lindblad.hpp"
#include "collapse/matrix.hpp"
#include "collapse/observable.hpp"
#include "collapse/purification.hpp"
#include "collapse/rng.hpp"
#include "collapse/simplex.hpp"

namespace {

using namespace collapse;

void bm_purification_rhs(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 eng = RngStream{1, 0}.make_engine();
  const SimplexPoint mu = sample_simplex_uniform(m, eng);
  const SimplexPoint ext = sample_simplex_uniform(m, eng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(purification_rhs(mu, ext, 1.0));
  }
}
BENCHMARK(bm_purification_rhs)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void bm_purification_trial(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 eng = RngStream{2, 0}.make_engine();
  const SimplexPoint mu0 = sample_simplex_uniform(m, eng);
  for (auto _ : state) {
    const SimplexPoint ext = sample_simplex_uniform(m, eng);
    benchmark::DoNotOptimize(integrate_purification(mu0, ext));
  }
}
BENCHMARK(bm_purification_trial)->Arg(2)->Arg(3)->Arg(6)->Unit(benchmark::kMicrosecond);

void bm_simplex_sample(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 eng = RngStream{3, 0}.make_engine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_simplex_uniform(m, eng));
  }
}
BENCHMARK(bm_simplex_sample)->Arg(3)->Arg(16);

void bm_lindblad_rhs(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  std::vector<double> diag(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = double(i);
  const LindbladSpec spec = dephasing(Observable::from_diagonal(diag), 1.0);
  std::mt19937_64 eng = RngStream{4, 0}.make_engine();
  const DensityMatrix rho = random_density(n, eng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lindblad_rhs(rho.matrix(), spec));
  }
}
BENCHMARK(bm_lindblad_rhs)->Arg(2)->Arg(4)->Arg(8);

void bm_combined_rhs(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  std::vector<double> diag(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = double(i);
  const Observable a = Observable::from_diagonal(diag);
  std::mt19937_64 eng = RngStream{5, 0}.make_engine();
  const CombinedSpec spec(dephasing(a, 1.0), a,
                          sample_simplex_uniform(static_cast<std::size_t>(a.points()), eng),
                          0.1);
  const DensityMatrix rho = random_density(n, eng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(combined_rhs(rho, spec));
  }
}
BENCHMARK(bm_combined_rhs)->Arg(2)->Arg(4)->Arg(8);

void bm_commutant(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  std::mt19937_64 eng = RngStream{6, 0}.make_engine();
  const std::vector<ComplexMatrix> gens = {random_hermitian(n, eng)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(commutant(gens));
  }
}
BENCHMARK(bm_commutant)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);

void bm_born_experiment(benchmark::State& state) {
  const SimplexPoint mu0({0.2, 0.3, 0.5});
  const std::uint64_t trials = static_cast<std::uint64_t>(state.range(0));
  const RunMode mode = state.range(1) == 0 ? RunMode::classify_only : RunMode::full_ode;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_experiment(mu0, trials, 1.0, ++seed, mode));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(trials) * state.iterations());
}
BENCHMARK(bm_born_experiment)
    ->Args({1000, 0})
    ->Args({1000, 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
