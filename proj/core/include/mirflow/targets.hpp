// Target ranking: position-weighted antiparallel complementarity between a
// mature miRNA and a transcriptome, with isoform consolidation.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mirflow/genome.hpp"

namespace mirflow {

struct TargetHit {
  std::string gene_id;
  double score = 0.0;  // total penalty; lower binds better
};

// Best-site penalty of the miRNA against one transcript. The miRNA pairs
// antiparallel to the transcript; every site start and end is free. Per
// aligned position: Watson-Crick 0, G:T wobble 0.5, mismatch 1, each gap
// base 2. Penalties double opposite miRNA positions 2-13 (1-based from the
// 5' end), including gaps that land there.
double target_site_score(const std::string& mirna, const std::string& transcript);

// Scores every transcript, keeps the keep_transcripts best by (score, id),
// consolidates isoforms by stripping a trailing ".<digits>" from the id and
// keeping the lowest score per gene, then returns the top_genes best genes
// ordered by (score, gene_id). Throws EmptyTranscriptome when there are no
// transcripts.
std::vector<TargetHit> target_rank(const std::string& mirna, const Genome& transcripts,
                                   std::size_t keep_transcripts = 100,
                                   std::size_t top_genes = 5);

}  // namespace mirflow
