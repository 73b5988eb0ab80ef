#include "doctest.h"

#include <cmath>
#include <random>

#include "mirflow/cluster.hpp"
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

std::vector<std::vector<std::string>> members_of(const std::vector<SequenceCluster>& clusters) {
  std::vector<std::vector<std::string>> out;
  for (const auto& c : clusters) out.push_back(c.members);
  return out;
}
}  // namespace

TEST_CASE("raw local alignment scores on hand-checked pairs") {
  CHECK_EQ(local_align_score("ACGTACGTACGTACGTACGTA", "ACGTACGTACGTACGTACGTA"),
           doctest::Approx(21.0));
  CHECK_EQ(local_align_score("ACG", "ACG"), doctest::Approx(3.0));
  CHECK_EQ(local_align_score("CGT", "ACGTA"), doctest::Approx(3.0));  // best local segment
  CHECK_EQ(local_align_score("ACGT", "TTTT"), doctest::Approx(1.0));  // single T match
  CHECK_EQ(local_align_score("AAAAA", "AAGAA"), doctest::Approx(2.0));  // mismatch never helps
  CHECK_EQ(local_align_score("AAAA", "CCCC"), doctest::Approx(0.0));  // empty alignment floor
}

TEST_CASE("affine gap worth: one bridge base pays open+extend, two do not pay") {
  const std::string a = "ACGTACGTTGCATGCA";
  // one inserted base: bridging beats the flank match, 16 - (5 + 2) = 9
  CHECK_EQ(local_align_score(a, "ACGTACGT" "C" "TGCATGCA"), doctest::Approx(9.0));
  // two inserted bases: the bridge costs 5 + 2*2 = 9, so the plain 8-mer wins
  CHECK_EQ(local_align_score(a, "ACGTACGT" "CC" "TGCATGCA"), doctest::Approx(8.0));
}

TEST_CASE("bitscore normalization fixed points") {
  const double ln2 = std::log(2.0);
  CHECK_EQ(bitscore_of(21.0), doctest::Approx((1.374 * 21.0 - std::log(0.711)) / ln2));
  CHECK_EQ(bitscore_of(21.0), doctest::Approx(42.12).epsilon(1e-3));
  CHECK_EQ(bitscore_of(3.0), doctest::Approx(6.44).epsilon(1e-2));
  CHECK_EQ(local_align_bitscore("ACGTACGTACGTACGTACGTA", "ACGTACGTACGTACGTACGTA"),
           doctest::Approx(42.12).epsilon(1e-3));
  CHECK_EQ(local_align_bitscore("ACG", "ACG"), doctest::Approx(6.44).epsilon(1e-2));
}

TEST_CASE("linkage edges demand a bitscore strictly above the threshold") {
  // best shared segment is the AAAAA run: raw 5
  const std::string s1 = "AAAAACCCCC";
  const std::string s2 = "AAAAAGGGGG";
  const double edge = local_align_bitscore(s1, s2);
  CHECK_EQ(edge, doctest::Approx(bitscore_of(5.0)));

  auto at = single_linkage_cluster({s1, s2}, edge);
  CHECK_EQ(at.size(), 2);  // equality is not enough
  auto below = single_linkage_cluster({s1, s2}, edge - 1e-9);
  CHECK_EQ(below.size(), 1);
}

TEST_CASE("identical mature duplicates land in one cluster at threshold 20") {
  const std::string m = "TGGAGAAGCAGGGCACGTGCA";
  auto clusters = single_linkage_cluster({m, m, m}, 20.0);
  REQUIRE_EQ(clusters.size(), 1);
  CHECK_EQ(clusters[0].id, m);
  CHECK_EQ(clusters[0].members, std::vector<std::string>{m});  // deduplicated
}

TEST_CASE("cluster ids and ordering") {
  // three near-identical 21-mers plus one unrelated sequence
  const std::string base = "ACGCATGTACATGCGTATGCA";
  std::string v1 = base;
  v1[0] = 'T';
  std::string v2 = base;
  v2[20] = 'C';
  const std::string lone = "CTCTCTAGAGAGGATCGATCG";
  auto clusters = single_linkage_cluster({v1, lone, base, v2}, 20.0);
  REQUIRE_EQ(clusters.size(), 2);
  // clusters sort by id = lexicographically smallest member
  CHECK_EQ(clusters[0].id, base);
  CHECK_EQ(clusters[0].members, std::vector<std::string>{base, v2, v1});
  CHECK_EQ(clusters[1].id, lone);
}

TEST_CASE("single linkage equals brute-force components on random sets") {
  std::mt19937_64 rng(1234);
  for (int round = 0; round < 4; ++round) {
    std::vector<std::string> seqs;
    std::uniform_int_distribution<std::size_t> len_d(15, 24);
    for (int i = 0; i < 50; ++i) {
      if (i % 5 == 4 && !seqs.empty()) {
        // mutated copy of an earlier sequence so real edges exist
        std::string s = seqs[static_cast<std::size_t>(i) / 2];
        std::uniform_int_distribution<std::size_t> pos(0, s.size() - 1);
        s[pos(rng)] = "ACGT"[std::uniform_int_distribution<int>(0, 3)(rng)];
        seqs.push_back(std::move(s));
      } else {
        seqs.push_back(random_seq(rng, len_d(rng)));
      }
    }
    const double threshold = 20.0 + round * 5.0;
    auto got = members_of(single_linkage_cluster(seqs, threshold));
    CHECK_EQ(got, oracle::brute_components(seqs, threshold));
  }
}

TEST_CASE("executor-parallel clustering matches the serial result") {
  std::mt19937_64 rng(555);
  std::vector<std::string> seqs;
  for (int i = 0; i < 40; ++i) seqs.push_back(random_seq(rng, 21));
  for (int i = 0; i < 10; ++i) {
    std::string s = seqs[static_cast<std::size_t>(i)];
    s[3] = s[3] == 'A' ? 'C' : 'A';
    seqs.push_back(std::move(s));
  }
  auto serial = single_linkage_cluster(seqs, 20.0);
  for (std::size_t workers : {1u, 3u, 8u}) {
    Executor ex(workers);
    auto parallel = single_linkage_cluster(seqs, 20.0, BitscoreParams{}, ex);
    REQUIRE_EQ(parallel.size(), serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      CHECK_EQ(parallel[i].id, serial[i].id);
      CHECK_EQ(parallel[i].members, serial[i].members);
    }
  }
}

TEST_CASE("empty input clusters to nothing") {
  CHECK(single_linkage_cluster({}, 20.0).empty());
}
