#include "doctest.h"

#include <random>

#include "mirflow/errors.hpp"
#include "mirflow/hairpin.hpp"
#include "mirflow/simulate.hpp"
#include "support/oracles.hpp"

using namespace mirflow;

namespace {

std::string random_seq(std::mt19937_64& rng, std::size_t len) {
  static const char bases[] = "ACGT";
  std::string s(len, 'A');
  std::uniform_int_distribution<int> d(0, 3);
  for (char& c : s) c = bases[d(rng)];
  return s;
}

int weight_of_pair(char a, char b) {
  if ((a == 'G' && b == 'C') || (a == 'C' && b == 'G')) return 3;
  if ((a == 'A' && b == 'T') || (a == 'T' && b == 'A')) return 2;
  if ((a == 'G' && b == 'T') || (a == 'T' && b == 'G')) return 1;
  return 0;
}

// Balance, nesting, minimum loop, legal pairs, and weight bookkeeping.
void check_invariants(const std::string& seq, const SecondaryStructure& st) {
  REQUIRE_EQ(st.dot_bracket.size(), seq.size());
  REQUIRE_EQ(st.pair_table.size(), seq.size());
  std::vector<std::size_t> stack;
  int weight = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    char c = st.dot_bracket[i];
    if (c == '(') {
      REQUIRE_GT(st.pair_table[i], static_cast<std::int32_t>(i));
      stack.push_back(i);
    } else if (c == ')') {
      REQUIRE_FALSE(stack.empty());
      std::size_t open = stack.back();
      stack.pop_back();
      REQUIRE_EQ(st.pair_table[open], static_cast<std::int32_t>(i));
      REQUIRE_EQ(st.pair_table[i], static_cast<std::int32_t>(open));
      REQUIRE_GE(i - open, 4);  // a hairpin loop of at least 3 between them
      int w = weight_of_pair(seq[open], seq[i]);
      REQUIRE_GT(w, 0);
      weight += w;
    } else {
      REQUIRE_EQ(c, '.');
      REQUIRE_EQ(st.pair_table[i], -1);
    }
  }
  REQUIRE(stack.empty());
  REQUIRE_EQ(weight, st.weight);
}

PlantedGenome small_planted() {
  PlantedGenomeParams p;
  p.n_hairpins = 1;
  p.genome_len = 5000;
  p.seed = 42;
  return simulate_planted_genome(p);
}

}  // namespace

TEST_CASE("fold weight equals the exhaustive optimum on short sequences") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> len_d(10, 14);
  for (int i = 0; i < 200; ++i) {
    std::string s = random_seq(rng, len_d(rng));
    SecondaryStructure st = fold(s);
    check_invariants(s, st);
    CHECK_EQ(st.weight, oracle::best_weight_exhaustive(s));
  }
}

TEST_CASE("ties resolve to the lexicographically smallest pair list") {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<std::size_t> len_d(10, 12);
  for (int i = 0; i < 150; ++i) {
    std::string s = random_seq(rng, len_d(rng));
    CHECK_EQ(fold(s).dot_bracket, oracle::lexmin_optimal_structure(s));
  }
  // A and T on both flanks admit several weight-4 pairings; the smallest
  // pair list wins.
  const std::string tie = "ATAAAATAAAAT";
  CHECK_EQ(fold(tie).dot_bracket, oracle::lexmin_optimal_structure(tie));
}

TEST_CASE("fold invariants hold on longer random sequences") {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<std::size_t> len_d(10, 60);
  for (int i = 0; i < 300; ++i) {
    std::string s = random_seq(rng, len_d(rng));
    check_invariants(s, fold(s));
  }
}

TEST_CASE("fold requires ten bases and never pairs N") {
  CHECK_THROWS_AS(fold("ACGTACGTA"), TooShort);
  SecondaryStructure st = fold("AAAANNNNTTTT");
  for (std::size_t i = 4; i < 8; ++i) CHECK_EQ(st.pair_table[i], -1);
  CHECK_GT(st.weight, 0);  // the A:T flanks still pair around the N block
}

TEST_CASE("window extraction produces the two oriented spans") {
  Genome g;
  g.names = {"chr1"};
  std::mt19937_64 rng(404);
  g.seqs = {random_seq(rng, 2000)};
  PipelineConfig cfg;  // search 300, flank 10

  Locus locus{0, 1000, Strand::Forward};
  auto windows = extract_windows(locus, 21, g, cfg);
  REQUIRE_EQ(windows.size(), 2);
  CHECK_EQ(windows[0].genome_start, 700);
  CHECK_EQ(windows[0].genome_end, 1031);
  CHECK_EQ(windows[0].mirna_offset, 300);
  CHECK_EQ(windows[1].genome_start, 990);
  CHECK_EQ(windows[1].genome_end, 1321);
  CHECK_EQ(windows[1].mirna_offset, 10);
  for (const auto& w : windows) {
    CHECK_EQ(w.mirna_length, 21);
    CHECK_EQ(w.sequence.size(), w.genome_end - w.genome_start);
    CHECK_EQ(w.sequence.substr(w.mirna_offset, 21), g.seqs[0].substr(1000, 21));
  }
}

TEST_CASE("minus-strand windows carry the mature verbatim in sense orientation") {
  Genome g;
  g.names = {"chr1"};
  std::mt19937_64 rng(405);
  g.seqs = {random_seq(rng, 2000)};
  PipelineConfig cfg;

  const std::string genome_fwd = g.seqs[0].substr(1000, 21);
  const std::string read = reverse_complement(genome_fwd);  // maps on the minus strand
  Locus locus{0, 1000, Strand::Reverse};
  auto windows = extract_windows(locus, 21, g, cfg);
  REQUIRE_EQ(windows.size(), 2);
  for (const auto& w : windows) {
    CHECK_EQ(w.strand, Strand::Reverse);
    CHECK_EQ(w.sequence.substr(w.mirna_offset, 21), read);
    CHECK_EQ(w.sequence, reverse_complement(
                             g.seqs[0].substr(w.genome_start, w.genome_end - w.genome_start)));
  }
  // genomic spans match the plus-strand layout; orientation lives in the
  // sequence and the offset, which counts from the reverse-complement end
  CHECK_EQ(windows[0].genome_start, 700);
  CHECK_EQ(windows[0].genome_end, 1031);
  CHECK_EQ(windows[0].mirna_offset, 10);
  CHECK_EQ(windows[1].genome_start, 990);
  CHECK_EQ(windows[1].genome_end, 1321);
  CHECK_EQ(windows[1].mirna_offset, 300);
}

TEST_CASE("windows clip at chromosome edges and collapse when identical") {
  Genome g;
  g.names = {"c"};
  std::mt19937_64 rng(406);
  g.seqs = {random_seq(rng, 120)};
  PipelineConfig cfg;
  auto windows = extract_windows(Locus{0, 5, Strand::Forward}, 21, g, cfg);
  REQUIRE_EQ(windows.size(), 2);
  CHECK_EQ(windows[0].genome_start, 0);  // upstream extension clips at 0
  CHECK_EQ(windows[0].genome_end, 36);   // 5 + 21 + extra_flank
  CHECK_EQ(windows[0].mirna_offset, 5);
  CHECK_EQ(windows[1].genome_start, 0);
  CHECK_EQ(windows[1].genome_end, 120);  // downstream extension clips at the end

  // On a tiny chromosome both spans clip to the same slice and collapse.
  Genome small;
  small.names = {"c"};
  small.seqs = {random_seq(rng, 30)};
  auto one = extract_windows(Locus{0, 5, Strand::Forward}, 21, small, cfg);
  REQUIRE_EQ(one.size(), 1);
  CHECK_EQ(one[0].genome_start, 0);
  CHECK_EQ(one[0].genome_end, 30);
  CHECK_EQ(one[0].mirna_offset, 5);
}

TEST_CASE("planted hairpin: full evaluation chain passes with the expected star") {
  PlantedGenome sim = small_planted();
  const PlantedTruth& t = sim.truth.at(0);
  const std::string hairpin =
      sim.genome.seqs[0].substr(t.hairpin_start, t.hairpin_end - t.hairpin_start);
  REQUIRE_EQ(hairpin.size(), 66);  // stem 30 + loop 6 + arm 30
  REQUIRE_EQ(hairpin.substr(2, 21), t.mature);

  // The stem pairs mirror-wise: position i pairs n-1-i.
  SecondaryStructure st = fold(hairpin);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK_EQ(st.pair_table[i], static_cast<std::int32_t>(65 - i));
  }

  CandidateWindow w;
  w.chrom_index = 0;
  w.genome_start = t.hairpin_start;
  w.genome_end = t.hairpin_end;
  w.strand = Strand::Forward;
  w.sequence = hairpin;
  w.mirna_offset = 2;
  w.mirna_length = 21;

  PipelineConfig cfg;
  SmallRnaRecord mature_rec;
  mature_rec.sequence = t.mature;
  mature_rec.counts = {200};
  mature_rec.loci = {{0, t.mature_start, Strand::Forward}};
  AlignedReference ref({mature_rec});

  PrecursorCandidate c = evaluate_candidate(w, 200, ref, cfg);
  CHECK_EQ(c.verdict, Verdict::Pass);
  REQUIRE(c.has_star);
  // mature [2,23) pairs [43,63]; with the 2-nt 3' overhang the star spans
  // [45,65] inclusive
  CHECK_EQ(c.star_offset, 45);
  CHECK_EQ(c.star_length, 21);
  CHECK_EQ(c.trim_begin, 0);
  CHECK_EQ(c.trim_end, 66);
  CHECK_EQ(c.precursor_genome_start(), t.hairpin_start);
  CHECK_EQ(c.precursor_genome_end(), t.hairpin_end);
  CHECK_EQ(c.mature_sequence(), t.mature);
}

TEST_CASE("star geometry for a mature on the 3' arm") {
  PlantedGenome sim = small_planted();
  const PlantedTruth& t = sim.truth.at(0);
  const std::string hairpin =
      sim.genome.seqs[0].substr(t.hairpin_start, t.hairpin_end - t.hairpin_start);
  CandidateWindow w;
  w.sequence = hairpin;
  w.mirna_offset = 38;
  w.mirna_length = 21;

  PrecursorCandidate c;
  c.window = w;
  c.structure = fold(hairpin);
  CHECK_EQ(check_duplex(c, PipelineConfig{}), Verdict::Pass);
  REQUIRE(derive_star(c));
  // mature [38,59) pairs [7,27]; shifting both duplex ends by the 2-nt
  // overhang puts the star at [9,29]
  CHECK_EQ(c.star_offset, 9);
  CHECK_EQ(c.star_length, 21);
}

TEST_CASE("a mature stretching across the loop apex is rejected") {
  PlantedGenome sim = small_planted();
  const PlantedTruth& t = sim.truth.at(0);
  const std::string hairpin =
      sim.genome.seqs[0].substr(t.hairpin_start, t.hairpin_end - t.hairpin_start);
  PrecursorCandidate c;
  c.window.sequence = hairpin;
  c.window.mirna_offset = 20;  // covers stem end, the loop, and the far arm
  c.window.mirna_length = 21;
  c.structure = fold(hairpin);
  CHECK_EQ(check_duplex(c, PipelineConfig{}), Verdict::InLoop);
}

TEST_CASE("unpaired mature bases trip the duplex gate") {
  // 33-mer with an outer G:C stem, a 7-base interior run, an inner G:C
  // stem and a T4 terminal loop. The only optimal structure pairs the Gs
  // with the Cs mirror-wise.
  const std::string seq = "GGGGGGG" + std::string(7, 'A') + "GGGG" + "TTTT" + "CCCC" +
                          std::string(7, 'C');
  REQUIRE_EQ(seq.size(), 33);
  SecondaryStructure st = fold(seq);
  REQUIRE_EQ(st.weight, 33);  // 11 G:C pairs

  PipelineConfig cfg;
  PrecursorCandidate c;
  c.window.sequence = seq;
  c.structure = st;

  // Mature = outer stem + the whole interior run: 7 unpaired > 5.
  c.window.mirna_offset = 0;
  c.window.mirna_length = 14;
  CHECK_EQ(check_duplex(c, cfg), Verdict::UnpairedExcess);

  // Tightening the bulge bound first flags the contiguous run.
  cfg.duplex_max_unpaired = 10;
  cfg.duplex_max_bulge = 3;
  CHECK_EQ(check_duplex(c, cfg), Verdict::BulgeExcess);

  // The pure stem region passes.
  cfg = PipelineConfig{};
  c.window.mirna_offset = 0;
  c.window.mirna_length = 7;
  CHECK_EQ(check_duplex(c, cfg), Verdict::Pass);
}

TEST_CASE("structural gate: too-long precursors and second loops") {
  const std::string seq = "GGGGGGG" + std::string(7, 'A') + "GGGG" + "TTTT" + "CCCC" +
                          std::string(7, 'C');
  PipelineConfig cfg;
  PrecursorCandidate c;
  c.window.sequence = seq;
  c.window.mirna_offset = 0;
  c.window.mirna_length = 7;
  c.structure = fold(seq);
  c.trim_begin = 0;
  c.trim_end = 33;

  // The A7 interior run exceeds max_second_loop; the T4 terminal loop of
  // the mature's own stem is exempt.
  CHECK_EQ(structural_gate(c, cfg), Verdict::SecondLoop);

  cfg.max_second_loop = 7;
  CHECK_EQ(structural_gate(c, cfg), Verdict::Pass);

  cfg = PipelineConfig{};
  cfg.max_premirna_len = 20;
  CHECK_EQ(structural_gate(c, cfg), Verdict::TooLong);
}

TEST_CASE("trim keeps the mature hairpin and sheds unrelated flanks") {
  PlantedGenome sim = small_planted();
  const PlantedTruth& t = sim.truth.at(0);
  // 40 random bases of genome context on each side of the hairpin
  const std::uint64_t lo = t.hairpin_start - 40;
  const std::uint64_t hi = t.hairpin_end + 40;
  CandidateWindow w;
  w.chrom_index = 0;
  w.genome_start = lo;
  w.genome_end = hi;
  w.strand = Strand::Forward;
  w.sequence = sim.genome.seqs[0].substr(lo, hi - lo);
  w.mirna_offset = static_cast<std::uint32_t>(t.mature_start - lo);
  w.mirna_length = 21;

  PipelineConfig cfg;
  PrecursorCandidate c;
  c.window = w;
  c.structure = fold(w.sequence);
  REQUIRE_EQ(check_duplex(c, cfg), Verdict::Pass);
  trim_to_hairpin(c, cfg);
  CHECK_LE(c.trim_begin, w.mirna_offset);
  CHECK_GE(c.trim_end, w.mirna_offset + w.mirna_length);
  // The trimmed span stays in the hairpin's neighbourhood instead of
  // swallowing the whole window.
  CHECK_LE(c.trim_end - c.trim_begin, 86);
  CHECK_EQ(structural_gate(c, cfg), Verdict::Pass);
}

TEST_CASE("aligned reference sums each record once within a span") {
  auto make = [](std::string seq, std::uint64_t count, std::vector<Locus> loci) {
    SmallRnaRecord r;
    r.sequence = std::move(seq);
    r.counts = {count};
    r.loci = std::move(loci);
    return r;
  };
  std::vector<SmallRnaRecord> recs = {
      make(std::string(21, 'A'), 100, {{0, 1000, Strand::Forward}}),
      make(std::string(21, 'C'), 30,
           {{0, 1010, Strand::Forward}, {0, 1030, Strand::Forward}}),  // counted once
      make(std::string(21, 'G'), 50, {{0, 1095, Strand::Forward}}),    // straddles the edge
      make(std::string(21, 'T'), 70, {{0, 1010, Strand::Reverse}}),    // other strand
      make(std::string(22, 'A') + "C", 40, {{1, 1000, Strand::Forward}}),  // other chrom
  };
  AlignedReference ref(recs);
  CHECK_EQ(ref.record_count(), 5);
  CHECK_EQ(ref.expression_in_span(0, Strand::Forward, 1000, 1100), 130);
  CHECK_EQ(ref.expression_in_span(0, Strand::Forward, 1000, 1120), 180);
  CHECK_EQ(ref.expression_in_span(0, Strand::Reverse, 1000, 1100), 70);
  CHECK_EQ(ref.expression_in_span(1, Strand::Forward, 0, 5000), 40);
  CHECK_EQ(ref.expression_in_span(2, Strand::Forward, 0, 5000), 0);
  CHECK_EQ(ref.total_of_sequence(std::string(21, 'A')), 100);
  CHECK_EQ(ref.total_of_sequence("ACGT"), 0);
}

TEST_CASE("dominance: expression share and floor") {
  PipelineConfig cfg;  // min_mirna_freq 100, threshold 0.75
  auto make = [](std::string seq, std::uint64_t count, std::vector<Locus> loci) {
    SmallRnaRecord r;
    r.sequence = std::move(seq);
    r.counts = {count};
    r.loci = std::move(loci);
    return r;
  };

  PrecursorCandidate c;
  c.window.chrom_index = 0;
  c.window.genome_start = 1000;
  c.window.genome_end = 1200;
  c.window.strand = Strand::Forward;
  c.window.sequence = std::string(200, 'A');
  c.trim_begin = 0;
  c.trim_end = 200;

  const std::string mature(21, 'A');
  const std::string decoy(21, 'C');

  {
    AlignedReference ref({make(mature, 150, {{0, 1010, Strand::Forward}}),
                          make(decoy, 50, {{0, 1100, Strand::Forward}})});
    CHECK_EQ(dominance_check(c, 150, ref, cfg), Verdict::Pass);  // 150/200 = 0.75
  }
  {
    AlignedReference ref({make(mature, 149, {{0, 1010, Strand::Forward}}),
                          make(decoy, 51, {{0, 1100, Strand::Forward}})});
    CHECK_EQ(dominance_check(c, 149, ref, cfg), Verdict::NotDominant);
  }
  {
    AlignedReference ref({make(mature, 150, {{0, 1010, Strand::Forward}})});
    CHECK_EQ(dominance_check(c, 99, ref, cfg), Verdict::LowExpression);
  }
  {
    AlignedReference empty{std::vector<SmallRnaRecord>{}};
    CHECK_EQ(dominance_check(c, 150, empty, cfg), Verdict::NotDominant);  // nothing mapped
  }
  {
    // An observed star read counts toward the mature side.
    PrecursorCandidate cs = c;
    cs.has_star = true;
    cs.star_offset = 100;
    cs.star_length = 21;
    const std::string star = cs.star_sequence();
    AlignedReference ref({make(mature, 120, {{0, 1010, Strand::Forward}}),
                          make(star, 30, {{0, 1100, Strand::Forward}}),
                          make(decoy, 50, {{0, 1150, Strand::Forward}})});
    CHECK_EQ(dominance_check(cs, 120, ref, cfg), Verdict::Pass);  // (120+30)/200
    cs.has_star = false;
    CHECK_EQ(dominance_check(cs, 120, ref, cfg), Verdict::NotDominant);  // 120/200
  }
}

TEST_CASE("verdict codes and gate depth ordering") {
  CHECK_EQ(verdict_code(Verdict::Pass), "PASS");
  CHECK_EQ(verdict_code(Verdict::InLoop), "IN_LOOP");
  CHECK_EQ(verdict_code(Verdict::UnpairedExcess), "UNPAIRED_EXCESS");
  CHECK_EQ(verdict_code(Verdict::BulgeExcess), "BULGE_EXCESS");
  CHECK_EQ(verdict_code(Verdict::StarUndefined), "STAR_UNDEFINED");
  CHECK_EQ(verdict_code(Verdict::TooLong), "TOO_LONG");
  CHECK_EQ(verdict_code(Verdict::SecondLoop), "SECOND_LOOP");
  CHECK_EQ(verdict_code(Verdict::LowExpression), "LOW_EXPRESSION");
  CHECK_EQ(verdict_code(Verdict::NotDominant), "NOT_DOMINANT");
  CHECK_GT(verdict_depth(Verdict::Pass), verdict_depth(Verdict::NotDominant));
  CHECK_GT(verdict_depth(Verdict::NotDominant), verdict_depth(Verdict::SecondLoop));
  CHECK_GT(verdict_depth(Verdict::SecondLoop), verdict_depth(Verdict::StarUndefined));
  CHECK_GT(verdict_depth(Verdict::StarUndefined), verdict_depth(Verdict::InLoop));
}
