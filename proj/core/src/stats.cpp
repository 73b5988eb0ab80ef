// Exact-arithmetic statistics kept deliberately dependency-free: erfc covers
// the normal tail and lgamma covers binomial coefficients.
#include "mirflow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "mirflow/errors.hpp"

namespace mirflow {

KalResult kal_z_test(std::uint64_t x1, std::uint64_t n1, std::uint64_t x2, std::uint64_t n2) {
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("kal_z_test: empty library");
  if (x1 > n1 || x2 > n2) throw std::invalid_argument("kal_z_test: count exceeds total");
  const double p1 = static_cast<double>(x1) / static_cast<double>(n1);
  const double p2 = static_cast<double>(x2) / static_cast<double>(n2);
  const double p0 = static_cast<double>(x1 + x2) / static_cast<double>(n1 + n2);
  KalResult r;
  if (p0 <= 0.0 || p0 >= 1.0) return r;  // no variance under the pooled null
  const double se = std::sqrt(p0 * (1.0 - p0) *
                              (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
  r.z = (p1 - p2) / se;
  r.p = std::erfc(std::abs(r.z) / std::sqrt(2.0));
  return r;
}

std::vector<double> bh_fdr(const std::vector<double>& p_values) {
  const std::size_t m = p_values.size();
  std::vector<double> q(m, 0.0);
  if (m == 0) return q;
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bh_fdr: p outside [0, 1]");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  double running = 1.0;
  for (std::size_t i = m; i-- > 0;) {
    const double adj =
        p_values[order[i]] * static_cast<double>(m) / static_cast<double>(i + 1);
    running = std::min(running, std::min(adj, 1.0));
    q[order[i]] = running;
  }
  return q;
}

double fold_change(double rpm_expt, double rpm_ctrl) {
  if (rpm_ctrl > 0.0) return rpm_expt / rpm_ctrl;
  if (rpm_expt > 0.0) return std::numeric_limits<double>::infinity();
  return 1.0;
}

namespace {

double log_choose(std::uint64_t a, std::uint64_t b) {
  return std::lgamma(static_cast<double>(a) + 1.0) - std::lgamma(static_cast<double>(b) + 1.0) -
         std::lgamma(static_cast<double>(a - b) + 1.0);
}

}  // namespace

double hypergeom_upper_tail(std::uint64_t N, std::uint64_t K, std::uint64_t n,
                            std::uint64_t k) {
  if (K > N || n > N) throw std::invalid_argument("hypergeom_upper_tail: K and n must not exceed N");
  const std::uint64_t hi = std::min(K, n);
  // The support floor: a draw of n from N cannot avoid the K marked items
  // once n exceeds the unmarked pool.
  const std::uint64_t lo = (n > N - K) ? n - (N - K) : 0;
  if (k <= lo) return 1.0;
  if (k > hi) return 0.0;
  const double log_denom = log_choose(N, n);
  double sum = 0.0;
  for (std::uint64_t i = k; i <= hi; ++i) {
    sum += std::exp(log_choose(K, i) + log_choose(N - K, n - i) - log_denom);
  }
  return std::min(sum, 1.0);
}

std::vector<DiffExprRow> differential_expression(const std::vector<ExpressionProfile>& profiles,
                                                 const std::vector<std::uint64_t>& library_totals,
                                                 std::size_t expt_index, std::size_t ctrl_index,
                                                 const PipelineConfig& cfg) {
  if (expt_index >= library_totals.size() || ctrl_index >= library_totals.size())
    throw std::invalid_argument("differential_expression: library index out of range");
  std::vector<DiffExprRow> rows;
  rows.reserve(profiles.size());
  std::vector<double> pvals;
  pvals.reserve(profiles.size());
  const std::uint64_t n1 = library_totals[expt_index];
  const std::uint64_t n2 = library_totals[ctrl_index];
  for (const ExpressionProfile& prof : profiles) {
    DiffExprRow row;
    row.mirna = prof.mirna;
    row.fold_change = fold_change(prof.rpm[expt_index], prof.rpm[ctrl_index]);
    if (n1 > 0 && n2 > 0) {
      const KalResult kr = kal_z_test(prof.counts[expt_index], n1, prof.counts[ctrl_index], n2);
      row.z = kr.z;
      row.p = kr.p;
    }
    pvals.push_back(row.p);
    rows.push_back(std::move(row));
  }
  const std::vector<double> qvals = bh_fdr(pvals);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].q = qvals[i];
    const bool fc_hit = rows[i].fold_change > cfg.fc_up || rows[i].fold_change < cfg.fc_down;
    rows[i].significant = fc_hit && rows[i].q < cfg.alpha;
  }
  return rows;
}

std::vector<EnrichmentResult> hypergeom_enrich(const std::vector<std::string>& sample_genes,
                                               const PathwayMap& background, double alpha) {
  const std::uint64_t N = background.gene_count();
  std::set<std::string> sample;
  for (const std::string& g : sample_genes) {
    if (background.gene_pathways.count(g) != 0) sample.insert(g);
  }
  const std::uint64_t n = sample.size();

  std::map<std::string, std::uint64_t> pathway_K;
  std::map<std::string, std::uint64_t> pathway_k;
  for (const auto& [gene, pathways] : background.gene_pathways) {
    const bool in_sample = sample.count(gene) != 0;
    for (const std::string& pw : pathways) {
      ++pathway_K[pw];
      if (in_sample) ++pathway_k[pw];
    }
  }

  std::vector<EnrichmentResult> results;
  results.reserve(pathway_K.size());
  for (const auto& [pw, K] : pathway_K) {
    EnrichmentResult r;
    r.pathway_id = pw;
    const auto name_it = background.pathway_names.find(pw);
    r.pathway_name = name_it == background.pathway_names.end() ? pw : name_it->second;
    r.K = K;
    r.N = N;
    r.n = n;
    const auto k_it = pathway_k.find(pw);
    r.k = k_it == pathway_k.end() ? 0 : k_it->second;
    r.p = hypergeom_upper_tail(N, K, n, r.k);
    r.enriched = r.p < alpha;
    results.push_back(std::move(r));
  }
  std::sort(results.begin(), results.end(), [](const EnrichmentResult& a, const EnrichmentResult& b) {
    if (a.p != b.p) return a.p < b.p;
    return a.pathway_id < b.pathway_id;
  });
  return results;
}

}  // namespace mirflow
