// Pairwise local alignment scoring and family clustering.
#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "mirflow/cluster.hpp"

namespace {

std::vector<std::string> random_matures(std::uint64_t seed, std::size_t n) {
  static const char bases[] = "ACGT";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(0, 3);
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string s(21 + rng() % 4, 'A');
    for (char& c : s) c = bases[d(rng)];
    out.push_back(std::move(s));
  }
  return out;
}

void bm_bitscore(benchmark::State& state) {
  const auto seqs = random_matures(41, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mirflow::local_align_bitscore(seqs[0], seqs[1]));
  }
}

void bm_single_linkage(benchmark::State& state) {
  const auto seqs = random_matures(43, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mirflow::single_linkage_cluster(seqs, 20.0));
  }
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(bm_bitscore);
BENCHMARK(bm_single_linkage)->Arg(50)->Arg(100)->Arg(200)->Complexity()->Unit(benchmark::kMillisecond);
