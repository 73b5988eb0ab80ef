// Synthetic benchmark construction: a random genome with perfect hairpins
// planted at known positions, plus decoy reads sampled from the background.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mirflow/annotation.hpp"
#include "mirflow/genome.hpp"

namespace mirflow {

struct PlantedGenomeParams {
  std::uint32_t n_hairpins = 20;
  std::uint32_t stem_len = 30;  // paired positions per arm; at least 25
  std::uint32_t loop_len = 6;
  std::uint32_t mature_len = 21;
  std::uint32_t mature_stem_offset = 2;  // mature start within the 5' arm
  std::uint64_t genome_len = 200000;
  std::uint64_t mature_count = 200;  // read count given to every mature
  double max_dust = 2.0;             // matures are resampled above this
  std::uint64_t seed = 1;
};

struct PlantedTruth {
  std::string mature;
  std::string chrom;
  std::uint64_t mature_start = 0;  // forward strand, 0-based
  std::uint64_t hairpin_start = 0;
  std::uint64_t hairpin_end = 0;  // half-open
};

struct PlantedGenome {
  Genome genome;
  std::vector<PlantedTruth> truth;
  std::vector<std::pair<std::string, std::uint64_t>> reads;  // sequence, count
};

// Builds a single-chromosome random genome and overwrites evenly spaced
// slots with hairpins stem + loop + folded-back arm. One stem base opposite
// the mature is turned into a G:T wobble, so the mature sequence keeps a
// fully paired duplex yet maps to exactly one genomic locus. Matures are
// resampled until they pass the low-complexity bound and occur nowhere else
// in the finished genome. Same params give byte-identical output.
PlantedGenome simulate_planted_genome(const PlantedGenomeParams& params);

struct NegativeSetParams {
  std::uint32_t min_len = 18;
  std::uint32_t max_len = 25;
  std::uint64_t count = 100;
  std::uint64_t seed = 1;
  std::uint64_t max_attempts = 0;  // 0 picks 1000 * count
};

// Uniform random genome substrings rejected when they contain an ambiguous
// base, overlap an excluded annotation interval, equal a known miRNA, or
// duplicate an earlier draw. Throws ExhaustedSampling when the attempt
// budget runs out.
std::vector<std::string> simulate_negative_set(const Genome& genome,
                                               const AnnotationIndex& excluded,
                                               const std::vector<std::string>& known_mirnas,
                                               const NegativeSetParams& params);

}  // namespace mirflow
