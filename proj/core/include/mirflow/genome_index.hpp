// Suffix-array index over the forward genome text. Queries are exact,
// full-length, ungapped; minus-strand hits come from searching the reverse
// complement of the query against the same forward text.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mirflow/genome.hpp"
#include "mirflow/sequence.hpp"

namespace mirflow {

class GenomeIndex {
 public:
  GenomeIndex() = default;

  // Chromosomes are concatenated with '#' sentinels. Since queries consist
  // of A/C/G/T only, no match can cover a sentinel or an N, so chromosome
  // boundaries need no special casing at query time.
  static GenomeIndex build(const Genome& genome);

  // All occurrences of the query on both strands, ordered by
  // (chrom_index, start, strand). Non-ACGT queries match nothing.
  std::vector<Locus> locate(const std::string& query) const;

  std::uint64_t genome_hash() const { return genome_hash_; }
  std::size_t text_size() const { return text_.size(); }
  const std::vector<std::uint32_t>& suffix_array() const { return sa_; }
  const std::string& text() const { return text_; }

  // Binary cache. Only the suffix array and the genome content hash are
  // stored; the text is rebuilt from the genome at load and the hash must
  // match or IndexMismatch is raised.
  void save(const std::string& path) const;
  static GenomeIndex load(const std::string& path, const Genome& genome);
  static GenomeIndex load_or_build(const Genome& genome, const std::string& cache_path);

 private:
  void rebuild_text(const Genome& genome);

  std::string text_;
  std::vector<std::uint32_t> sa_;
  std::vector<std::uint64_t> chrom_offsets_;  // text offset of each chromosome
  std::vector<std::uint64_t> chrom_lengths_;
  std::uint64_t genome_hash_ = 0;
};

}  // namespace mirflow
