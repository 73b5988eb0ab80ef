// Gotoh-style local alignment; the clustering itself is a union-find over
// the strict-threshold edge set, so it is order-free by construction.
#include "mirflow/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace mirflow {

double local_align_score(const std::string& a, const std::string& b,
                         const BitscoreParams& params) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const double open_first = params.gap_open + params.gap_extend;
  const double neg = -1e30;

  std::vector<double> h_prev(m + 1, 0.0), h_cur(m + 1, 0.0);
  std::vector<double> f(m + 1, neg);  // gap in b (vertical)
  double best = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    double e = neg;  // gap in a (horizontal)
    h_cur[0] = 0.0;
    for (std::size_t j = 1; j <= m; ++j) {
      e = std::max(h_cur[j - 1] - open_first, e - params.gap_extend);
      f[j] = std::max(h_prev[j] - open_first, f[j] - params.gap_extend);
      const double sub = a[i - 1] == b[j - 1] ? params.match : params.mismatch;
      const double diag = h_prev[j - 1] + sub;
      h_cur[j] = std::max({0.0, diag, e, f[j]});
      best = std::max(best, h_cur[j]);
    }
    std::swap(h_prev, h_cur);
  }
  return best;
}

double bitscore_of(double raw_score, const BitscoreParams& params) {
  return (params.lambda * raw_score - std::log(params.k)) / std::log(2.0);
}

double local_align_bitscore(const std::string& a, const std::string& b,
                            const BitscoreParams& params) {
  return bitscore_of(local_align_score(a, b, params), params);
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<std::string> unique_sorted(const std::vector<std::string>& seqs) {
  std::vector<std::string> u(seqs.begin(), seqs.end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

std::vector<SequenceCluster> components_of(const std::vector<std::string>& u,
                                           const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  UnionFind uf(u.size());
  for (const auto& [i, j] : edges) uf.unite(i, j);
  std::map<std::size_t, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < u.size(); ++i) groups[uf.find(i)].push_back(u[i]);
  std::vector<SequenceCluster> clusters;
  clusters.reserve(groups.size());
  for (auto& [root, members] : groups) {
    // Members arrive in index order over a sorted universe, so they are
    // already sorted and the first one is the id.
    (void)root;
    clusters.push_back({members.front(), std::move(members)});
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const SequenceCluster& a, const SequenceCluster& b) { return a.id < b.id; });
  return clusters;
}

}  // namespace

std::vector<SequenceCluster> single_linkage_cluster(const std::vector<std::string>& seqs,
                                                    double threshold,
                                                    const BitscoreParams& params) {
  const std::vector<std::string> u = unique_sorted(seqs);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      if (local_align_bitscore(u[i], u[j], params) > threshold) edges.emplace_back(i, j);
    }
  }
  return components_of(u, edges);
}

std::vector<SequenceCluster> single_linkage_cluster(const std::vector<std::string>& seqs,
                                                    double threshold,
                                                    const BitscoreParams& params, Executor& ex) {
  const std::vector<std::string> u = unique_sorted(seqs);
  std::vector<std::size_t> rows(u.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Dataset<std::size_t> in = partition(std::move(rows), ex.workers());
  Dataset<std::pair<std::size_t, std::size_t>> out =
      ex.flat_map(in, "cluster_rows", [&](const std::size_t& i) {
        std::vector<std::pair<std::size_t, std::size_t>> row_edges;
        for (std::size_t j = i + 1; j < u.size(); ++j) {
          if (local_align_bitscore(u[i], u[j], params) > threshold) row_edges.emplace_back(i, j);
        }
        return row_edges;
      });
  return components_of(u, out.collect());
}

}  // namespace mirflow
