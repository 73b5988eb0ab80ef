// Differential-expression statistics: Kal's two-proportion z-test, the
// Benjamini-Hochberg step-up correction, fold-change conventions, and the
// hypergeometric upper tail for pathway enrichment.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mirflow/config.hpp"
#include "mirflow/io.hpp"

namespace mirflow {

struct KalResult {
  double z = 0.0;
  double p = 1.0;
};

// Compares proportions x1/n1 and x2/n2 under the pooled null. Degenerate
// pools (both all-zero or all-n) return z = 0, p = 1. Two-sided p.
KalResult kal_z_test(std::uint64_t x1, std::uint64_t n1, std::uint64_t x2, std::uint64_t n2);

// Step-up adjusted q-values, returned in the input order. Values must lie
// in [0, 1].
std::vector<double> bh_fdr(const std::vector<double>& p_values);

// RPM ratio experiment/control. A zero control with expressed experiment
// yields +infinity (always beyond the up-gate); both zero yields 1.
double fold_change(double rpm_expt, double rpm_ctrl);

// P(X >= k) for X ~ Hypergeometric(N, K, n): exact log-space summation of
// binomial-coefficient terms via lgamma.
double hypergeom_upper_tail(std::uint64_t N, std::uint64_t K, std::uint64_t n,
                            std::uint64_t k);

struct ExpressionProfile {
  std::string mirna;
  std::vector<std::uint64_t> counts;  // per library
  std::vector<double> rpm;            // count * 1e6 / library mapped total
};

struct DiffExprRow {
  std::string mirna;
  double fold_change = 1.0;
  double z = 0.0;
  double p = 1.0;
  double q = 1.0;
  bool significant = false;
};

// One comparison pair: fold change on RPM, Kal's test on raw counts vs the
// mapped library totals, FDR corrected within this pair only. significant
// = (FC > fc_up or FC < fc_down) and q < alpha. Rows keep profile order.
std::vector<DiffExprRow> differential_expression(const std::vector<ExpressionProfile>& profiles,
                                                 const std::vector<std::uint64_t>& library_totals,
                                                 std::size_t expt_index, std::size_t ctrl_index,
                                                 const PipelineConfig& cfg);

struct EnrichmentResult {
  std::string pathway_id;
  std::string pathway_name;
  std::uint64_t k = 0;  // sample genes in the pathway
  std::uint64_t n = 0;  // sample size
  std::uint64_t K = 0;  // background genes in the pathway
  std::uint64_t N = 0;  // background size
  double p = 1.0;
  bool enriched = false;
};

// Tests every pathway of the background map against the sample gene set;
// sample genes outside the background universe are ignored. Results sorted
// by (p, pathway_id). enriched = p < alpha.
std::vector<EnrichmentResult> hypergeom_enrich(const std::vector<std::string>& sample_genes,
                                               const PathwayMap& background, double alpha);

}  // namespace mirflow
