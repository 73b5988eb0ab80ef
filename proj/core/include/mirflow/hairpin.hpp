// Precursor window extraction, secondary-structure folding, and the gate
// chain that turns a candidate window into a pass/fail verdict.
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "mirflow/config.hpp"
#include "mirflow/genome.hpp"
#include "mirflow/sequence.hpp"

namespace mirflow {

struct SecondaryStructure {
  std::string dot_bracket;              // aligned 1:1 with the folded sequence
  std::vector<std::int32_t> pair_table;  // partner position, -1 when unpaired
  std::int32_t weight = 0;              // optimum pairing weight reached

  bool paired(std::size_t i) const { return pair_table[i] >= 0; }
};

// Maximum weighted pairing (G:C 3, A:T 2, G:T 1) over nested structures
// with hairpin loops of at least 3 nt. Ties resolve to the structure whose
// (i, j) pair list is lexicographically smallest, which makes the fold a
// pure function of the sequence. N never pairs. Requires length >= 10.
SecondaryStructure fold(const std::string& seq);

// A genomic slice in sense orientation: for a minus-strand locus the slice
// is reverse-complemented so the mature read always appears verbatim.
struct CandidateWindow {
  std::uint32_t chrom_index = 0;
  std::uint64_t genome_start = 0;  // forward-strand slice coordinates
  std::uint64_t genome_end = 0;
  Strand strand = Strand::Forward;
  std::string sequence;
  std::uint32_t mirna_offset = 0;  // mature position within sequence
  std::uint32_t mirna_length = 0;
};

// Two windows per locus: one extended upstream by the search range, one
// downstream, both padded by extra_flank on the short side and clipped to
// the chromosome.
std::vector<CandidateWindow> extract_windows(const Locus& locus, std::uint32_t read_len,
                                             const Genome& genome, const PipelineConfig& cfg);

enum class Verdict : std::uint8_t {
  Pending,
  Pass,
  InLoop,
  UnpairedExcess,
  BulgeExcess,
  StarUndefined,
  TooLong,
  SecondLoop,
  LowExpression,
  NotDominant,
};

// Stable code strings used in output files, e.g. "IN_LOOP".
std::string verdict_code(Verdict v);

// How far along the gate chain a verdict got; higher survives longer.
// Used to pick the better of the two windows of a locus.
int verdict_depth(Verdict v);

struct PrecursorCandidate {
  CandidateWindow window;
  SecondaryStructure structure;
  Verdict verdict = Verdict::Pending;
  bool has_star = false;
  std::uint32_t star_offset = 0;
  std::uint32_t star_length = 0;
  std::uint32_t trim_begin = 0;  // [begin, end) within window.sequence
  std::uint32_t trim_end = 0;

  std::string mature_sequence() const {
    return window.sequence.substr(window.mirna_offset, window.mirna_length);
  }
  std::string star_sequence() const {
    return has_star ? window.sequence.substr(star_offset, star_length) : std::string();
  }
  // Trimmed precursor span mapped back to forward-strand coordinates.
  std::uint64_t precursor_genome_start() const;
  std::uint64_t precursor_genome_end() const;
};

// Gate (1): the mature region must sit on one hairpin arm with at most
// duplex_max_unpaired unpaired bases and no unpaired run longer than
// duplex_max_bulge. Returns Pass or the first failure.
Verdict check_duplex(const PrecursorCandidate& c, const PipelineConfig& cfg);

// Gate (2): derives the duplex partner region with 2-nt 3' overhangs from
// the pair table, extrapolating across bulges from the nearest paired
// mature base. False when the partner leaves the window.
bool derive_star(PrecursorCandidate& c);

// Gate (3) prep: trims the window to the local hairpin around the mature
// duplex by ascending through enclosing pairs, stopping at multiloop
// branches and at interior gaps wider than max_second_loop so unrelated
// flank pairings are not absorbed. The mature region is always kept.
void trim_to_hairpin(PrecursorCandidate& c, const PipelineConfig& cfg);

// Gate (3): trimmed length must not exceed max_premirna_len and every
// interior unpaired run other than the terminal loop of the mature's own
// stem must be at most max_second_loop.
Verdict structural_gate(const PrecursorCandidate& c, const PipelineConfig& cfg);

// Read-only broadcast of every aligned record, queried by the dominance
// gate and reused as the expression reference.
class AlignedReference {
 public:
  AlignedReference() = default;
  explicit AlignedReference(const std::vector<SmallRnaRecord>& aligned_records);

  // Sum of record totals over records owning at least one locus on the
  // given strand fully contained in [start, end); each record counts once.
  std::uint64_t expression_in_span(std::uint32_t chrom_index, Strand strand,
                                   std::uint64_t start, std::uint64_t end) const;

  // Total count of the record with exactly this sequence, 0 when absent.
  std::uint64_t total_of_sequence(const std::string& seq) const;

  std::size_t record_count() const { return totals_.size(); }

 private:
  struct LocusEntry {
    std::uint64_t start;
    std::uint64_t end;
    std::uint32_t record_index;
  };
  // keyed by chrom_index * 2 + strand bit; entries sorted by start
  std::unordered_map<std::uint64_t, std::vector<LocusEntry>> loci_;
  std::vector<std::uint64_t> totals_;
  std::unordered_map<std::string, std::uint64_t> seq_totals_;
};

// Gate (4): the mature (plus star, when its read was observed) must carry
// at least dominance_threshold of the expression mapped inside the trimmed
// precursor span, and the mature itself at least min_mirna_freq reads.
Verdict dominance_check(const PrecursorCandidate& c, std::uint64_t mature_total,
                        const AlignedReference& ref, const PipelineConfig& cfg);

// Runs fold and all gates in their fixed order; the returned candidate
// carries exactly one first-failure verdict or Pass.
PrecursorCandidate evaluate_candidate(CandidateWindow window, std::uint64_t mature_total,
                                      const AlignedReference& ref, const PipelineConfig& cfg);

}  // namespace mirflow
