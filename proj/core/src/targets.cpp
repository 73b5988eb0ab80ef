// Semi-global penalty DP: the miRNA must be consumed in full, the transcript
// pays nothing outside the chosen site.
#include "mirflow/targets.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

#include "mirflow/errors.hpp"

namespace mirflow {

namespace {

bool watson_crick(char m, char t) {
  switch (m) {
    case 'A': return t == 'T';
    case 'C': return t == 'G';
    case 'G': return t == 'C';
    case 'T': return t == 'A';
    default: return false;
  }
}

bool wobble(char m, char t) {
  return (m == 'G' && t == 'T') || (m == 'T' && t == 'G');
}

// 1-based miRNA positions 2-13 carry doubled penalties.
double position_factor(std::size_t orig_pos) {
  return (orig_pos >= 1 && orig_pos <= 12) ? 2.0 : 1.0;
}

std::string gene_of(const std::string& transcript_id) {
  const std::size_t dot = transcript_id.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == transcript_id.size())
    return transcript_id;
  for (std::size_t i = dot + 1; i < transcript_id.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(transcript_id[i])) == 0) return transcript_id;
  }
  return transcript_id.substr(0, dot);
}

}  // namespace

double target_site_score(const std::string& mirna, const std::string& transcript) {
  const std::size_t len = mirna.size();
  if (len == 0) throw std::invalid_argument("target_site_score: empty query");
  // Row x has consumed x miRNA bases walking 3'->5', so DP column order runs
  // along the transcript 5'->3' while pairing stays antiparallel.
  const auto orig = [len](std::size_t x) { return len - 1 - x; };

  std::vector<double> prev(transcript.size() + 1, 0.0);
  std::vector<double> cur(transcript.size() + 1, 0.0);
  for (std::size_t x = 1; x <= len; ++x) {
    const char m = mirna[orig(x - 1)];
    const double del_cost = 2.0 * position_factor(orig(x - 1));
    const double ins_factor = x < len ? position_factor(orig(x)) : 1.0;
    cur[0] = prev[0] + del_cost;
    for (std::size_t j = 1; j <= transcript.size(); ++j) {
      const char t = transcript[j - 1];
      double sub = 1.0;
      if (watson_crick(m, t)) sub = 0.0;
      else if (wobble(m, t)) sub = 0.5;
      sub *= position_factor(orig(x - 1));
      cur[j] = std::min({prev[j - 1] + sub, prev[j] + del_cost, cur[j - 1] + 2.0 * ins_factor});
    }
    std::swap(prev, cur);
  }
  return *std::min_element(prev.begin(), prev.end());
}

std::vector<TargetHit> target_rank(const std::string& mirna, const Genome& transcripts,
                                   std::size_t keep_transcripts, std::size_t top_genes) {
  if (transcripts.size() == 0) throw EmptyTranscriptome();

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(transcripts.size());
  for (std::size_t i = 0; i < transcripts.size(); ++i) {
    scored.emplace_back(target_site_score(mirna, transcripts.seqs[i]), i);
  }
  std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return transcripts.names[a.second] < transcripts.names[b.second];
  });
  if (scored.size() > keep_transcripts) scored.resize(keep_transcripts);

  std::map<std::string, double> best_per_gene;
  for (const auto& [score, idx] : scored) {
    const std::string gene = gene_of(transcripts.names[idx]);
    auto [it, inserted] = best_per_gene.emplace(gene, score);
    if (!inserted) it->second = std::min(it->second, score);
  }

  std::vector<TargetHit> hits;
  hits.reserve(best_per_gene.size());
  for (const auto& [gene, score] : best_per_gene) hits.push_back({gene, score});
  std::sort(hits.begin(), hits.end(), [](const TargetHit& a, const TargetHit& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.gene_id < b.gene_id;
  });
  if (hits.size() > top_genes) hits.resize(top_genes);
  return hits;
}

}  // namespace mirflow
