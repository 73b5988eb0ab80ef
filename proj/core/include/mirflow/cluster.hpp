// Family grouping of predicted matures: local alignment bitscores with
// short-query nucleotide scoring, then single-linkage components.
#pragma once

#include <string>
#include <vector>

#include "mirflow/dataflow.hpp"

namespace mirflow {

struct BitscoreParams {
  double match = 1.0;
  double mismatch = -3.0;
  double gap_open = 5.0;    // cost of a length-g gap is gap_open + g * gap_extend
  double gap_extend = 2.0;
  double lambda = 1.374;
  double k = 0.711;
};

// Smith-Waterman raw score under the affine convention above.
double local_align_score(const std::string& a, const std::string& b,
                         const BitscoreParams& params = {});

// Normalized bits: (lambda * raw - ln k) / ln 2.
double bitscore_of(double raw_score, const BitscoreParams& params = {});

double local_align_bitscore(const std::string& a, const std::string& b,
                            const BitscoreParams& params = {});

struct SequenceCluster {
  std::string id;                    // lexicographically smallest member
  std::vector<std::string> members;  // sorted
};

// Connects two sequences when their bitscore exceeds threshold, then emits
// the connected components. Input order and duplicates never matter: the
// sequence set is deduplicated and sorted first. Clusters sort by id.
std::vector<SequenceCluster> single_linkage_cluster(const std::vector<std::string>& seqs,
                                                    double threshold,
                                                    const BitscoreParams& params = {});

// Same result; the pair matrix is scored row-parallel on the executor.
std::vector<SequenceCluster> single_linkage_cluster(const std::vector<std::string>& seqs,
                                                    double threshold,
                                                    const BitscoreParams& params, Executor& ex);

}  // namespace mirflow
