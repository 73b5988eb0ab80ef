// Folding cost by window length; the pipeline folds two windows per locus.
#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "mirflow/hairpin.hpp"

namespace {

std::string random_seq(std::uint64_t seed, std::size_t len) {
  static const char bases[] = "ACGT";
  std::mt19937_64 rng(seed);
  std::string s(len, 'A');
  std::uniform_int_distribution<int> d(0, 3);
  for (char& c : s) c = bases[d(rng)];
  return s;
}

void bm_fold(benchmark::State& state) {
  const std::string seq = random_seq(17, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mirflow::fold(seq));
  }
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(bm_fold)->Arg(60)->Arg(120)->Arg(240)->Arg(331)->Complexity();
