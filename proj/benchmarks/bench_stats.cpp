// Statistical kernels: z test, step-up correction, hypergeometric tail.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mirflow/stats.hpp"

namespace {

void bm_kal_z(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(mirflow::kal_z_test(4831, 1000000, 9120, 2000000));
  }
}

void bm_bh_fdr(benchmark::State& state) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> ps(static_cast<std::size_t>(state.range(0)));
  for (double& p : ps) p = d(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mirflow::bh_fdr(ps));
  }
  state.SetComplexityN(state.range(0));
}

void bm_hypergeom(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(mirflow::hypergeom_upper_tail(2000, 400, 150, 45));
  }
}

}  // namespace

BENCHMARK(bm_kal_z);
BENCHMARK(bm_bh_fdr)->Arg(1000)->Arg(10000)->Complexity();
BENCHMARK(bm_hypergeom);
