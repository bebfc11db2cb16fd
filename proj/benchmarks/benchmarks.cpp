// Micro-benchmarks for the hot paths: client perturbation, the analytic
// kernel, KDE evaluation, transition-matrix assembly, the constrained
// solver, and per-user attack inference.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "rvns/attack.hpp"
#include "rvns/data.hpp"
#include "rvns/kde.hpp"
#include "rvns/perturbation.hpp"
#include "rvns/random.hpp"
#include "rvns/reconstruction.hpp"
#include "rvns/types.hpp"

namespace {

const rvns::DataRange kRange{0.0, 10.0};

rvns::Dataset make_data(std::size_t n) {
  rvns::Rng rng(99);
  return rvns::generate_chi_squared(2, n, kRange, rng);
}

void BM_KernelDensity(benchmark::State& state) {
  const rvns::PerturbationConfig config{kRange, 2.0, 1};
  rvns::Rng rng(1);
  double x = rng.uniform(0.0, 10.0);
  double y = rng.uniform(0.0, 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rvns::kernel_density(x, y, config));
    x += 0.1;
    if (x > 10.0) x -= 10.0;
    y += 0.7;
    if (y > 10.0) y -= 10.0;
  }
}
BENCHMARK(BM_KernelDensity);

void BM_Perturb(benchmark::State& state) {
  const rvns::PerturbationConfig config{kRange, 2.0,
                                        static_cast<int>(state.range(0))};
  rvns::Rng rng(2);
  double x = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rvns::perturb(x, config, rng));
    x += 0.37;
    if (x > 10.0) x -= 10.0;
  }
}
BENCHMARK(BM_Perturb)->Arg(1)->Arg(5);

void BM_KdeAt(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const rvns::Dataset data = make_data(n);
  const rvns::GridPtr grid = rvns::make_uniform_grid(kRange, 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rvns::kde_at(grid, data.values, rvns::KdeConfig{}));
  }
}
BENCHMARK(BM_KdeAt)->Arg(1000)->Arg(10000);

void BM_BuildTransitionMatrix(benchmark::State& state) {
  const rvns::PerturbationConfig config{kRange, 2.0, 1};
  const rvns::GridPtr grid =
      rvns::make_uniform_grid(kRange, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rvns::build_transition_matrix(grid, config));
  }
}
BENCHMARK(BM_BuildTransitionMatrix)->Arg(100)->Arg(400);

void BM_SolveDensity(benchmark::State& state) {
  const rvns::PerturbationConfig pconfig{kRange, 2.0, 5};
  const rvns::GridPtr grid = rvns::make_uniform_grid(kRange, 100);
  const rvns::Dataset data = make_data(2000);
  rvns::Rng rng(3);
  const auto reports = rvns::perturb_dataset(data, pconfig, rng);
  std::vector<double> pooled;
  for (const auto& report : reports) {
    pooled.insert(pooled.end(), report.samples.begin(), report.samples.end());
  }
  const rvns::DensityVector target =
      rvns::kde_at(grid, pooled, rvns::KdeConfig{});
  const rvns::TransitionMatrix matrix =
      rvns::build_transition_matrix(grid, pconfig);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rvns::solve_density(target, matrix, rvns::ReconstructionConfig{}));
  }
}
BENCHMARK(BM_SolveDensity)->Unit(benchmark::kMillisecond);

void BM_InferUser(benchmark::State& state) {
  const rvns::PerturbationConfig config{kRange, 2.0, 5};
  const rvns::Dataset data = make_data(64);
  rvns::Rng rng(4);
  const auto reports = rvns::perturb_dataset(data, config, rng);
  std::size_t next = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rvns::infer_user(reports[next], config));
    next = (next + 1) % reports.size();
  }
}
BENCHMARK(BM_InferUser)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
