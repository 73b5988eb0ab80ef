#include "mirflow/prefilter.hpp"

#include <array>

#include "mirflow/errors.hpp"

namespace mirflow {

namespace {

int base_code(char c) {
  switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default: return -1;
  }
}

template <typename Pred>
std::vector<SmallRnaRecord> keep_if(const std::vector<SmallRnaRecord>& records, Pred pred) {
  std::vector<SmallRnaRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (pred(r)) out.push_back(r);
  }
  return out;
}

}  // namespace

double dust_score(const std::string& seq) {
  if (seq.size() < 4) throw TooShort(seq.size(), 4);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (base_code(seq[i]) < 0) throw InvalidBase(i, seq[i]);
  }
  std::array<std::uint32_t, 64> counts{};
  std::size_t triplets = seq.size() - 2;
  for (std::size_t i = 0; i < triplets; ++i) {
    int code = (base_code(seq[i]) << 4) | (base_code(seq[i + 1]) << 2) | base_code(seq[i + 2]);
    ++counts[static_cast<std::size_t>(code)];
  }
  std::uint64_t repeats = 0;
  for (std::uint32_t c : counts) {
    repeats += static_cast<std::uint64_t>(c) * (c - 1) / 2;
  }
  return static_cast<double>(repeats) / static_cast<double>(triplets - 1);
}

bool passes_low_complexity(const std::string& seq, double threshold) {
  return dust_score(seq) <= threshold;
}

bool passes_abundance_length(const SmallRnaRecord& rec, const PipelineConfig& cfg) {
  return rec.total_count() >= cfg.min_srna_freq && rec.sequence.size() >= cfg.min_srna_len;
}

bool passes_mirna_length(const SmallRnaRecord& rec, const PipelineConfig& cfg) {
  std::size_t len = rec.sequence.size();
  return len >= cfg.mirna_len_min && len <= cfg.mirna_len_max;
}

bool passes_locus_count(const SmallRnaRecord& rec, const PipelineConfig& cfg) {
  return !rec.loci.empty() && rec.loci.size() <= cfg.max_loci;
}

bool hits_excluded_annotation(const SmallRnaRecord& rec, const AnnotationIndex& index) {
  std::uint64_t len = rec.sequence.size();
  for (const auto& locus : rec.loci) {
    if (index.overlaps_excluded(locus.chrom_index, locus.start, locus.start + len)) return true;
  }
  return false;
}

std::vector<SmallRnaRecord> low_complexity_filter(const std::vector<SmallRnaRecord>& records,
                                                  double threshold) {
  return keep_if(records,
                 [&](const SmallRnaRecord& r) { return passes_low_complexity(r.sequence, threshold); });
}

std::vector<SmallRnaRecord> abundance_length_filter(const std::vector<SmallRnaRecord>& records,
                                                    const PipelineConfig& cfg) {
  return keep_if(records, [&](const SmallRnaRecord& r) { return passes_abundance_length(r, cfg); });
}

std::vector<SmallRnaRecord> exclude_known_nonmirna(const std::vector<SmallRnaRecord>& records,
                                                   const AnnotationIndex& index) {
  return keep_if(records, [&](const SmallRnaRecord& r) { return !hits_excluded_annotation(r, index); });
}

std::vector<SmallRnaRecord> mirna_length_gate(const std::vector<SmallRnaRecord>& records,
                                              const PipelineConfig& cfg) {
  return keep_if(records, [&](const SmallRnaRecord& r) { return passes_mirna_length(r, cfg); });
}

}  // namespace mirflow
