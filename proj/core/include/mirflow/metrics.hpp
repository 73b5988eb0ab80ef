// Per-stage run accounting and binary-classification metrics.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mirflow {

struct StageMetrics {
  std::string stage;
  std::uint64_t in_count = 0;
  std::uint64_t out_count = 0;
  double seconds = 0.0;
};

// Tab-separated with a header line: stage, in_count, out_count, seconds.
void write_stage_metrics(std::ostream& out, const std::vector<StageMetrics>& rows);

// Peak resident set size of this process (VmHWM), in bytes. 0 when the
// platform does not expose it.
std::uint64_t peak_rss_bytes();

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;
};

struct ClassificationMetrics {
  double precision = 0.0;
  double sensitivity = 0.0;
  double accuracy = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
};

// Standard formulas; any 0/0 denominator yields 0 for that metric.
ClassificationMetrics confusion_metrics(const ConfusionCounts& c);

// Counts of the 7 exclusive regions of a three-set Venn diagram, in the
// order: only_a, only_b, only_c, ab, ac, bc, abc.
struct Venn3Counts {
  std::uint64_t only_a = 0;
  std::uint64_t only_b = 0;
  std::uint64_t only_c = 0;
  std::uint64_t ab = 0;
  std::uint64_t ac = 0;
  std::uint64_t bc = 0;
  std::uint64_t abc = 0;
};

Venn3Counts venn3(const std::vector<std::string>& a, const std::vector<std::string>& b,
                  const std::vector<std::string>& c);

}  // namespace mirflow
