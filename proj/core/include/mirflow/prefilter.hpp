// Record-level filters applied before alignment plus the post-alignment
// annotation exclusion. Each filter exists in two forms: a per-record
// predicate the dataflow stages wrap, and a whole-list convenience form.
#pragma once

#include <vector>

#include "mirflow/annotation.hpp"
#include "mirflow/config.hpp"
#include "mirflow/sequence.hpp"

namespace mirflow {

// Triplet-repetition statistic over the whole read: with T = len-2
// overlapping 3-mers of multiplicities c_t, score = [sum c_t(c_t-1)/2] /
// (T-1). Zero iff all 3-mers are distinct. Requires length >= 4.
double dust_score(const std::string& seq);

bool passes_low_complexity(const std::string& seq, double threshold);
bool passes_abundance_length(const SmallRnaRecord& rec, const PipelineConfig& cfg);
bool passes_mirna_length(const SmallRnaRecord& rec, const PipelineConfig& cfg);
bool passes_locus_count(const SmallRnaRecord& rec, const PipelineConfig& cfg);

// True iff any locus of the record overlaps an excluded feature interval
// by at least one base.
bool hits_excluded_annotation(const SmallRnaRecord& rec, const AnnotationIndex& index);

std::vector<SmallRnaRecord> low_complexity_filter(const std::vector<SmallRnaRecord>& records,
                                                  double threshold);
std::vector<SmallRnaRecord> abundance_length_filter(const std::vector<SmallRnaRecord>& records,
                                                    const PipelineConfig& cfg);
std::vector<SmallRnaRecord> exclude_known_nonmirna(const std::vector<SmallRnaRecord>& records,
                                                   const AnnotationIndex& index);
std::vector<SmallRnaRecord> mirna_length_gate(const std::vector<SmallRnaRecord>& records,
                                              const PipelineConfig& cfg);

}  // namespace mirflow
