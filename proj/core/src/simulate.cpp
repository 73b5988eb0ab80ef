// Hairpin planting keeps one deliberate G:T wobble opposite the mature so
// the mature's reverse complement never appears verbatim in the genome.
#include "mirflow/simulate.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "mirflow/errors.hpp"
#include "mirflow/prefilter.hpp"
#include "mirflow/sequence.hpp"

namespace mirflow {

namespace {

constexpr char kBases[] = {'A', 'C', 'G', 'T'};

char complement_base(char c) {
  switch (c) {
    case 'A': return 'T';
    case 'C': return 'G';
    case 'G': return 'C';
    case 'T': return 'A';
    default: return 'N';
  }
}

std::string random_bases(std::mt19937_64& rng, std::size_t len) {
  std::uniform_int_distribution<int> d(0, 3);
  std::string s(len, 'A');
  for (char& c : s) c = kBases[d(rng)];
  return s;
}

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

struct HairpinDraft {
  std::string text;    // stem + loop + folded-back arm
  std::string mature;  // stem substring that becomes the expressed read
};

// Stems are redrawn until the mature clears the low-complexity bound and
// carries a T for the wobble substitution.
HairpinDraft draw_hairpin(std::mt19937_64& rng, const PlantedGenomeParams& p) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const std::string stem = random_bases(rng, p.stem_len);
    const std::string mature = stem.substr(p.mature_stem_offset, p.mature_len);
    if (p.mature_len >= 4 && dust_score(mature) > p.max_dust) continue;

    // Center-most T of the mature hosts the wobble.
    std::size_t wobble = std::string::npos;
    const std::size_t center = p.mature_stem_offset + p.mature_len / 2;
    for (std::size_t q = p.mature_stem_offset; q < p.mature_stem_offset + p.mature_len; ++q) {
      if (stem[q] != 'T') continue;
      const auto dist = [&](std::size_t x) { return x > center ? x - center : center - x; };
      if (wobble == std::string::npos || dist(q) < dist(wobble)) wobble = q;
    }
    if (wobble == std::string::npos) continue;

    std::string loop(p.loop_len, 'A');
    for (std::size_t i = 0; i < loop.size(); ++i) {
      if (i < (loop.size() + 1) / 2) loop[i] = 'C';
    }
    std::string arm(p.stem_len, 'A');
    for (std::size_t x = 0; x < p.stem_len; ++x) arm[x] = complement_base(stem[p.stem_len - 1 - x]);
    arm[p.stem_len - 1 - wobble] = 'G';  // T:G keeps the duplex paired

    return {stem + loop + arm, mature};
  }
  throw ExhaustedSampling("simulate_planted_genome: no stem satisfied the mature constraints");
}

}  // namespace

PlantedGenome simulate_planted_genome(const PlantedGenomeParams& p) {
  if (p.n_hairpins == 0) throw std::invalid_argument("simulate_planted_genome: need hairpins");
  if (p.stem_len < 25) throw std::invalid_argument("simulate_planted_genome: stem below 25");
  if (p.loop_len < 3) throw std::invalid_argument("simulate_planted_genome: loop below 3");
  if (p.mature_len == 0 || p.mature_stem_offset + p.mature_len > p.stem_len)
    throw std::invalid_argument("simulate_planted_genome: mature must sit inside the stem");
  const std::uint64_t hairpin_len = 2ull * p.stem_len + p.loop_len;
  const std::uint64_t slot = p.genome_len / (p.n_hairpins + 1);
  if (slot < hairpin_len + 100)
    throw std::invalid_argument("simulate_planted_genome: genome too short for hairpin count");

  std::mt19937_64 rng(p.seed);
  std::string g = random_bases(rng, p.genome_len);

  std::vector<std::uint64_t> starts(p.n_hairpins);
  std::vector<HairpinDraft> drafts(p.n_hairpins);
  for (std::uint32_t i = 0; i < p.n_hairpins; ++i) {
    starts[i] = slot * (i + 1);
    drafts[i] = draw_hairpin(rng, p);
    g.replace(starts[i], hairpin_len, drafts[i].text);
  }

  // Chance collisions elsewhere in the background would make a mature map
  // to more than one locus; redraw such hairpins until every mature occurs
  // exactly once and its reverse complement not at all.
  for (int round = 0;; ++round) {
    if (round >= 64)
      throw ExhaustedSampling("simulate_planted_genome: could not isolate mature sequences");
    bool ok = true;
    for (std::uint32_t i = 0; i < p.n_hairpins; ++i) {
      if (count_occurrences(g, drafts[i].mature) == 1 &&
          count_occurrences(g, reverse_complement(drafts[i].mature)) == 0)
        continue;
      ok = false;
      drafts[i] = draw_hairpin(rng, p);
      g.replace(starts[i], hairpin_len, drafts[i].text);
    }
    if (ok) break;
  }

  PlantedGenome out;
  out.genome.names.push_back("sim1");
  out.genome.seqs.push_back(std::move(g));
  out.truth.reserve(p.n_hairpins);
  out.reads.reserve(p.n_hairpins);
  for (std::uint32_t i = 0; i < p.n_hairpins; ++i) {
    PlantedTruth t;
    t.mature = drafts[i].mature;
    t.chrom = "sim1";
    t.mature_start = starts[i] + p.mature_stem_offset;
    t.hairpin_start = starts[i];
    t.hairpin_end = starts[i] + hairpin_len;
    out.truth.push_back(std::move(t));
    out.reads.emplace_back(drafts[i].mature, p.mature_count);
  }
  return out;
}

std::vector<std::string> simulate_negative_set(const Genome& genome,
                                               const AnnotationIndex& excluded,
                                               const std::vector<std::string>& known_mirnas,
                                               const NegativeSetParams& p) {
  if (p.min_len == 0 || p.min_len > p.max_len)
    throw std::invalid_argument("simulate_negative_set: bad length range");
  const std::uint64_t total = genome.total_length();
  if (total < p.max_len) throw std::invalid_argument("simulate_negative_set: genome too short");

  std::vector<std::uint64_t> cumulative(genome.size());
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < genome.size(); ++i) {
    acc += genome.seqs[i].size();
    cumulative[i] = acc;
  }

  const std::set<std::string> known(known_mirnas.begin(), known_mirnas.end());
  std::set<std::string> drawn;
  std::vector<std::string> out;
  out.reserve(p.count);

  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<std::uint64_t> offset_dist(0, total - 1);
  std::uniform_int_distribution<std::uint32_t> len_dist(p.min_len, p.max_len);

  std::uint64_t budget = p.max_attempts != 0 ? p.max_attempts
                                             : std::max<std::uint64_t>(1000, p.count * 1000);
  while (out.size() < p.count) {
    if (budget-- == 0) throw ExhaustedSampling("simulate_negative_set: attempt budget exhausted");
    const std::uint64_t offset = offset_dist(rng);
    const std::uint32_t len = len_dist(rng);
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), offset);
    const std::size_t chrom = static_cast<std::size_t>(it - cumulative.begin());
    const std::uint64_t chrom_start = chrom == 0 ? 0 : cumulative[chrom - 1];
    const std::uint64_t start = offset - chrom_start;
    const std::string& seq = genome.seqs[chrom];
    if (start + len > seq.size()) continue;
    const std::string s = seq.substr(start, len);
    if (!is_acgt(s)) continue;
    if (excluded.overlaps_excluded(static_cast<std::uint32_t>(chrom), start, start + len)) continue;
    if (known.count(s) != 0) continue;
    if (!drawn.insert(s).second) continue;
    out.push_back(s);
  }
  return out;
}

}  // namespace mirflow
