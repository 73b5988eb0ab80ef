// End-to-end run orchestration: manifest validation, the staged dataflow
// from raw libraries to predictions, differential expression, enrichment,
// and every output file the run directory contains.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mirflow/config.hpp"
#include "mirflow/hairpin.hpp"
#include "mirflow/io.hpp"
#include "mirflow/metrics.hpp"
#include "mirflow/sequence.hpp"

namespace mirflow {

struct RunManifest {
  std::vector<LibraryInput> libraries;
  std::string genome_path;
  std::string annotation_path;  // optional; empty disables the exclusion gate
  std::string guide_path;       // required when run_diff
  std::string pathway_path;     // required when run_enrich
  std::string transcript_path;  // required when run_enrich (target ranking)
  std::string index_path;       // optional suffix-array cache location
  std::string out_dir;
  bool run_diff = false;
  bool run_enrich = false;
  PipelineConfig config;
};

// Raises GuideRequired, EnrichRequiresDiff, or ConfigError on an unrunnable
// manifest. Called by run_pipeline before any I/O.
void validate_manifest(const RunManifest& manifest);

struct LibraryStats {
  std::string library_id;
  std::string format;
  std::uint64_t total_reads = 0;     // sum of counts after collapsing
  std::uint64_t distinct_reads = 0;  // collapsed records
  std::uint64_t mapped_reads = 0;    // counts on records with >= 1 locus
};

struct MirnaPrediction {
  std::string mature;
  std::vector<std::uint64_t> counts;  // per library, manifest order
  std::uint64_t total = 0;
  std::vector<Locus> loci;
  std::vector<PrecursorCandidate> precursors;  // passing, distinct genomic spans
};

// One evaluated locus/window combination; precursors.tsv prints them all.
struct PrecursorRow {
  std::string mature;
  PrecursorCandidate candidate;
};

struct RunResult {
  std::vector<MirnaPrediction> predictions;
  std::vector<PrecursorRow> candidates;
  std::vector<LibraryStats> library_stats;
  std::vector<std::uint64_t> mapped_totals;  // per library, RPM denominator
  std::vector<StageMetrics> stage_metrics;
  std::vector<std::string> written_files;  // paths relative to out_dir
  std::size_t merged_records = 0;
  std::size_t aligned_records = 0;
  double elapsed_seconds = 0.0;
};

// Runs the full pipeline described by the manifest and writes the output
// set into out_dir: ten files for a prediction run, two more when run_diff,
// one more when run_enrich. Result tables are byte-identical across worker
// counts; run_summary.tsv and stage_metrics.tsv carry timing, and
// run_config.tsv echoes the configured worker count.
RunResult run_pipeline(const RunManifest& manifest);

// --- evaluation against a simulated truth set ---

struct TruthEntry {
  std::string sequence;
  bool positive = false;
};

// TSV with header "sequence\tlabel\tlocus"; label is "positive" or
// "negative".
std::vector<TruthEntry> load_truth(const std::string& path);
void write_truth(const std::string& path, const std::vector<TruthEntry>& entries,
                 const std::vector<std::string>& loci);

// First column of a mirna_predictions.tsv (header skipped).
std::vector<std::string> load_prediction_sequences(const std::string& path);

// Predicted vs truth: tp = predicted positives, fn = missed positives,
// fp = predicted negatives or unknowns, tn = untouched negatives.
ConfusionCounts confusion_against_truth(const std::vector<std::string>& predicted,
                                        const std::vector<TruthEntry>& truth);

void write_evaluation(const std::string& path, const ConfusionCounts& counts,
                      const ClassificationMetrics& metrics);

}  // namespace mirflow
