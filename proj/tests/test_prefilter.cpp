#include "doctest.h"

#include <random>

#include "mirflow/errors.hpp"
#include "mirflow/prefilter.hpp"
#include "support/oracles.hpp"

using namespace mirflow;

namespace {
SmallRnaRecord rec(std::string seq, std::uint64_t count, std::vector<Locus> loci = {}) {
  SmallRnaRecord r;
  r.sequence = std::move(seq);
  r.counts = {count};
  r.loci = std::move(loci);
  return r;
}

std::string random_seq(std::mt19937_64& rng, std::size_t len) {
  static const char bases[] = "ACGT";
  std::string s(len, 'A');
  std::uniform_int_distribution<int> d(0, 3);
  for (char& c : s) c = bases[d(rng)];
  return s;
}
}  // namespace

TEST_CASE("triplet statistic matches the map-based reference") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> len_d(4, 40);
  for (int i = 0; i < 500; ++i) {
    std::string s = random_seq(rng, len_d(rng));
    CHECK_EQ(dust_score(s), doctest::Approx(oracle::dust_brute(s)).epsilon(1e-12));
  }
}

TEST_CASE("triplet statistic fixed points") {
  // 20-mer AC repeat: 9 ACA + 9 CAC triplets, (36+36)/17.
  CHECK_EQ(dust_score("ACACACACACACACACACAC"), doctest::Approx(72.0 / 17.0));
  // All 3-mers distinct.
  CHECK_EQ(dust_score("ACGTAC"), doctest::Approx(0.0));
  CHECK_EQ(dust_score("AAAA"), doctest::Approx(1.0));
  CHECK_THROWS_AS(dust_score("ACG"), TooShort);
  CHECK_THROWS_AS(dust_score("ACGNACG"), InvalidBase);
}

TEST_CASE("abundance and length gate") {
  PipelineConfig cfg;  // min_srna_freq 10, min_srna_len 18
  const std::string s18(18, 'A');
  const std::string s17(17, 'A');
  CHECK(passes_abundance_length(rec(s18, 10), cfg));
  CHECK_FALSE(passes_abundance_length(rec(s18, 9), cfg));
  CHECK_FALSE(passes_abundance_length(rec(s17, 100), cfg));
  SmallRnaRecord multi = rec(s18, 4);
  multi.counts = {4, 6};  // summed across libraries
  CHECK(passes_abundance_length(multi, cfg));
}

TEST_CASE("mature length window") {
  PipelineConfig cfg;  // 21..24
  CHECK_FALSE(passes_mirna_length(rec(std::string(20, 'A'), 1), cfg));
  CHECK(passes_mirna_length(rec(std::string(21, 'A'), 1), cfg));
  CHECK(passes_mirna_length(rec(std::string(24, 'A'), 1), cfg));
  CHECK_FALSE(passes_mirna_length(rec(std::string(25, 'A'), 1), cfg));
}

TEST_CASE("locus count gate keeps 1..max_loci") {
  PipelineConfig cfg;
  cfg.max_loci = 2;
  std::vector<Locus> two = {{0, 0, Strand::Forward}, {0, 50, Strand::Forward}};
  std::vector<Locus> three = {{0, 0, Strand::Forward}, {0, 50, Strand::Forward},
                              {0, 90, Strand::Reverse}};
  CHECK_FALSE(passes_locus_count(rec("ACGT", 1), cfg));  // unmapped
  CHECK(passes_locus_count(rec("ACGT", 1, two), cfg));
  CHECK_FALSE(passes_locus_count(rec("ACGT", 1, three), cfg));
}

TEST_CASE("annotation exclusion needs only one offending locus") {
  Genome g;
  g.names = {"chr1"};
  g.seqs = {std::string(1000, 'A')};
  AnnotationIndex idx(g, {{"chr1", 100, 200, FeatureClass::RRna}});

  auto inside = rec(std::string(21, 'A'), 1, {{0, 150, Strand::Forward}});
  auto outside = rec(std::string(21, 'A'), 1, {{0, 400, Strand::Forward}});
  auto both = rec(std::string(21, 'A'), 1,
                  {{0, 400, Strand::Forward}, {0, 190, Strand::Reverse}});
  CHECK(hits_excluded_annotation(inside, idx));
  CHECK_FALSE(hits_excluded_annotation(outside, idx));
  CHECK(hits_excluded_annotation(both, idx));

  auto survivors = exclude_known_nonmirna({inside, outside, both}, idx);
  REQUIRE_EQ(survivors.size(), 1);
  CHECK_EQ(survivors[0].loci.at(0).start, 400);
}

TEST_CASE("whole-list filters preserve record order") {
  PipelineConfig cfg;
  cfg.min_srna_freq = 5;
  cfg.min_srna_len = 4;
  std::vector<SmallRnaRecord> in = {
      rec("ACGTAGGC", 7), rec("TTTTTTTT", 9), rec("ACGTACCA", 2), rec("CCGTAGGA", 5)};
  auto kept = abundance_length_filter(in, cfg);
  REQUIRE_EQ(kept.size(), 3);
  CHECK_EQ(kept[0].sequence, "ACGTAGGC");
  CHECK_EQ(kept[2].sequence, "CCGTAGGA");

  auto complex_only = low_complexity_filter(kept, 2.0);
  REQUIRE_EQ(complex_only.size(), 2);  // the T homopolymer scores far above 2
  CHECK_EQ(complex_only[0].sequence, "ACGTAGGC");
  CHECK_EQ(complex_only[1].sequence, "CCGTAGGA");
}
