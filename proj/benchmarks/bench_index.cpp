// Suffix-array construction and both-strand exact lookup.
#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "mirflow/genome.hpp"
#include "mirflow/genome_index.hpp"

namespace {

mirflow::Genome random_genome(std::uint64_t seed, std::size_t len) {
  static const char bases[] = "ACGT";
  std::mt19937_64 rng(seed);
  mirflow::Genome g;
  g.names = {"chr1"};
  std::string s(len, 'A');
  std::uniform_int_distribution<int> d(0, 3);
  for (char& c : s) c = bases[d(rng)];
  g.seqs = {std::move(s)};
  return g;
}

void bm_index_build(benchmark::State& state) {
  const mirflow::Genome g = random_genome(23, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mirflow::GenomeIndex::build(g));
  }
  state.SetComplexityN(state.range(0));
}

void bm_index_locate(benchmark::State& state) {
  const mirflow::Genome g = random_genome(29, 1000000);
  const mirflow::GenomeIndex idx = mirflow::GenomeIndex::build(g);
  std::mt19937_64 rng(31);
  std::vector<std::string> queries;
  for (int i = 0; i < 512; ++i) {
    const std::size_t at = rng() % (g.seqs[0].size() - 21);
    queries.push_back(g.seqs[0].substr(at, 21));
  }
  std::size_t qi = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(idx.locate(queries[qi]));
    qi = (qi + 1) % queries.size();
  }
}

}  // namespace

BENCHMARK(bm_index_build)->Arg(100000)->Arg(1000000)->Complexity()->Unit(benchmark::kMillisecond);
BENCHMARK(bm_index_locate);
