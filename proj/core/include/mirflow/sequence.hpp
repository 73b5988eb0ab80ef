// Nucleotide string handling and the merged small-RNA record that flows
// through the pipeline. Sequences are stored uppercase DNA (U folded to T).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mirflow {

// Uppercases, folds U->T, and rejects anything outside ACGTU (N included:
// reads carrying ambiguity codes are unusable for exact matching).
// Throws InvalidBase with the offending 0-based position.
std::string normalize_sequence(const std::string& raw);

// True if the string is non-empty and contains only A/C/G/T.
bool is_acgt(const std::string& seq);

// Reverse complement over ACGTN (N maps to N).
std::string reverse_complement(const std::string& seq);

enum class Strand : std::uint8_t { Forward, Reverse };

inline char strand_char(Strand s) { return s == Strand::Forward ? '+' : '-'; }

// Genomic placement of a read: chromosome index into the genome's name
// table, 0-based start of the match on the forward strand, and the strand
// the read sequence matches on.
struct Locus {
  std::uint32_t chrom_index = 0;
  std::uint64_t start = 0;
  Strand strand = Strand::Forward;

  friend bool operator==(const Locus& a, const Locus& b) {
    return a.chrom_index == b.chrom_index && a.start == b.start && a.strand == b.strand;
  }
  friend bool operator<(const Locus& a, const Locus& b) {
    if (a.chrom_index != b.chrom_index) return a.chrom_index < b.chrom_index;
    if (a.start != b.start) return a.start < b.start;
    return static_cast<int>(a.strand) < static_cast<int>(b.strand);
  }
};

// One unique sequence merged across libraries. counts is indexed by library
// (same order as the input list); loci is filled by alignment.
struct SmallRnaRecord {
  std::string sequence;
  std::vector<std::uint64_t> counts;
  std::vector<Locus> loci;

  std::uint64_t total_count() const {
    std::uint64_t sum = 0;
    for (auto c : counts) sum += c;
    return sum;
  }
};

}  // namespace mirflow
