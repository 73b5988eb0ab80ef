#include "mirflow/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace mirflow {

void write_stage_metrics(std::ostream& out, const std::vector<StageMetrics>& rows) {
  out << "stage\tin_count\tout_count\tseconds\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f", r.seconds);
    out << r.stage << '\t' << r.in_count << '\t' << r.out_count << '\t' << buf << '\n';
  }
}

std::uint64_t peak_rss_bytes() {
  std::ifstream status("/proc/self/status");
  if (!status) return 0;
  std::string line;
  while (std::getline(status, line)) {
    if (line.rfind("VmHWM:", 0) != 0) continue;
    std::istringstream fields(line.substr(6));
    std::uint64_t kb = 0;
    fields >> kb;
    return kb * 1024;
  }
  return 0;
}

namespace {

double ratio_or_zero(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

ClassificationMetrics confusion_metrics(const ConfusionCounts& c) {
  double tp = static_cast<double>(c.tp);
  double fp = static_cast<double>(c.fp);
  double tn = static_cast<double>(c.tn);
  double fn = static_cast<double>(c.fn);

  ClassificationMetrics m;
  m.precision = ratio_or_zero(tp, tp + fp);
  m.sensitivity = ratio_or_zero(tp, tp + fn);
  m.accuracy = ratio_or_zero(tp + tn, tp + fp + tn + fn);
  m.f1 = ratio_or_zero(2.0 * tp, 2.0 * tp + fp + fn);
  // Product form of the denominator; computed in doubles, fine up to ~1e15
  // per factor which desk-scale counts never approach.
  double den = std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
  m.mcc = ratio_or_zero(tp * tn - fp * fn, den);
  return m;
}

Venn3Counts venn3(const std::vector<std::string>& a, const std::vector<std::string>& b,
                  const std::vector<std::string>& c) {
  std::set<std::string> sa(a.begin(), a.end());
  std::set<std::string> sb(b.begin(), b.end());
  std::set<std::string> sc(c.begin(), c.end());
  std::set<std::string> all;
  all.insert(sa.begin(), sa.end());
  all.insert(sb.begin(), sb.end());
  all.insert(sc.begin(), sc.end());

  Venn3Counts v;
  for (const auto& id : all) {
    bool in_a = sa.count(id) > 0;
    bool in_b = sb.count(id) > 0;
    bool in_c = sc.count(id) > 0;
    if (in_a && in_b && in_c) ++v.abc;
    else if (in_a && in_b) ++v.ab;
    else if (in_a && in_c) ++v.ac;
    else if (in_b && in_c) ++v.bc;
    else if (in_a) ++v.only_a;
    else if (in_b) ++v.only_b;
    else ++v.only_c;
  }
  return v;
}

}  // namespace mirflow
