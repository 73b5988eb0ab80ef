// Pipeline tuning knobs. Parsed from a flat key=value file; every knob has
// a default so an empty config is valid.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace mirflow {

struct PipelineConfig {
  // Ingestion / prefilter.
  std::uint64_t min_srna_freq = 10;    // drop reads seen fewer times than this (summed)
  std::uint64_t min_mirna_freq = 100;  // expression floor for a final prediction
  std::uint32_t min_srna_len = 18;
  std::uint32_t mirna_len_min = 21;
  std::uint32_t mirna_len_max = 24;
  double dust_threshold = 2.0;  // low-complexity cutoff, triplet formula

  // Alignment / precursor extraction.
  std::uint32_t max_loci = 15;
  std::uint32_t max_premirna_len = 300;
  std::uint32_t precursor_search_range = 300;
  std::uint32_t extra_flank = 10;

  // Hairpin structural gates.
  std::uint32_t duplex_max_unpaired = 5;
  std::uint32_t duplex_max_bulge = 3;
  std::uint32_t max_second_loop = 5;
  double dominance_threshold = 0.75;

  // Differential expression.
  double fc_up = 2.0;
  double fc_down = 0.5;  // defaults to 1/fc_up when the file sets only fc_up
  double alpha = 0.05;

  // Clustering.
  double bitscore_threshold = 20.0;

  // Execution.
  std::uint32_t workers = 1;
};

// Reads key=value lines; '#' starts a comment, blank lines are skipped.
// Unknown keys and unparsable values raise ConfigError. If the file sets
// fc_up but not fc_down, fc_down becomes 1/fc_up.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::string& path);

// Writes every knob as key=value, one per line, in declaration order.
// Floating values round-trip exactly through parse_config.
void serialize_config(const PipelineConfig& cfg, std::ostream& out);

// Range and ordering checks (e.g. mirna_len_min <= mirna_len_max, workers
// >= 1). Raises ConfigError on the first violation.
void validate_config(const PipelineConfig& cfg);

}  // namespace mirflow
