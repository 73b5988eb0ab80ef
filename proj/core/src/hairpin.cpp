#include "mirflow/hairpin.hpp"

#include <algorithm>

#include "mirflow/errors.hpp"

namespace mirflow {

namespace {

int pair_weight(char a, char b) {
  if ((a == 'G' && b == 'C') || (a == 'C' && b == 'G')) return 3;
  if ((a == 'A' && b == 'T') || (a == 'T' && b == 'A')) return 2;
  if ((a == 'G' && b == 'T') || (a == 'T' && b == 'G')) return 1;
  return 0;
}

}  // namespace

SecondaryStructure fold(const std::string& seq) {
  const std::int32_t n = static_cast<std::int32_t>(seq.size());
  if (n < 10) throw TooShort(seq.size(), 10);

  const std::size_t nn = static_cast<std::size_t>(n);
  auto at = [nn](std::int32_t i, std::int32_t j) {
    return static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j);
  };

  std::vector<std::int8_t> pw(nn * nn, 0);
  for (std::int32_t i = 0; i < n; ++i) {
    // Minimum hairpin loop of 3 unpaired bases: (i, j) pairs only for
    // j - i >= 4.
    for (std::int32_t j = i + 4; j < n; ++j)
      pw[at(i, j)] = static_cast<std::int8_t>(pair_weight(seq[i], seq[j]));
  }

  // W(i,j) = best weight on seq[i..j]; either i is unpaired or i pairs
  // with some k, splitting the interval.
  std::vector<std::int32_t> W(nn * nn, 0);
  for (std::int32_t i = n - 5; i >= 0; --i) {
    for (std::int32_t j = i + 4; j < n; ++j) {
      std::int32_t best = W[at(i + 1, j)];
      for (std::int32_t k = i + 4; k <= j; ++k) {
        std::int32_t w = pw[at(i, k)];
        if (w == 0) continue;
        std::int32_t cand = w + W[at(i + 1, k - 1)] + (k < j ? W[at(k + 1, j)] : 0);
        if (cand > best) best = cand;
      }
      W[at(i, j)] = best;
    }
  }

  // Lexicographically smallest optimal pair list: always pair the current
  // left end when an optimal structure does, with the smallest partner.
  // Equal-weight pair lists are never prefixes of one another (every extra
  // pair adds weight), so the greedy choice is globally lex-minimal.
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  std::vector<std::pair<std::int32_t, std::int32_t>> work;
  work.emplace_back(0, n - 1);
  while (!work.empty()) {
    auto [i, j] = work.back();
    work.pop_back();
    while (i < j) {
      if (j - i < 4 || W[at(i, j)] == 0) break;
      const std::int32_t target = W[at(i, j)];
      bool paired = false;
      for (std::int32_t k = i + 4; k <= j; ++k) {
        std::int32_t w = pw[at(i, k)];
        if (w == 0) continue;
        if (w + W[at(i + 1, k - 1)] + (k < j ? W[at(k + 1, j)] : 0) == target) {
          pairs.emplace_back(i, k);
          if (k + 1 < j) work.emplace_back(k + 1, j);
          j = k - 1;
          ++i;
          paired = true;
          break;
        }
      }
      if (!paired) ++i;  // W(i,j) == W(i+1,j) holds by construction
    }
  }

  SecondaryStructure s;
  s.dot_bracket.assign(static_cast<std::size_t>(n), '.');
  s.pair_table.assign(static_cast<std::size_t>(n), -1);
  s.weight = W[at(0, n - 1)];
  for (auto [i, j] : pairs) {
    s.pair_table[static_cast<std::size_t>(i)] = j;
    s.pair_table[static_cast<std::size_t>(j)] = i;
    s.dot_bracket[static_cast<std::size_t>(i)] = '(';
    s.dot_bracket[static_cast<std::size_t>(j)] = ')';
  }
  return s;
}

std::vector<CandidateWindow> extract_windows(const Locus& locus, std::uint32_t read_len,
                                             const Genome& genome, const PipelineConfig& cfg) {
  const std::string& chrom = genome.seqs.at(locus.chrom_index);
  const std::uint64_t chrom_len = chrom.size();
  const std::uint64_t start = locus.start;
  const std::uint64_t end = std::min(chrom_len, locus.start + read_len);

  auto minus_clipped = [](std::uint64_t v, std::uint64_t sub) { return v >= sub ? v - sub : 0; };

  struct Span {
    std::uint64_t lo, hi;
  };
  const Span spans[2] = {
      {minus_clipped(start, cfg.precursor_search_range),
       std::min(chrom_len, end + cfg.extra_flank)},
      {minus_clipped(start, cfg.extra_flank),
       std::min(chrom_len, end + cfg.precursor_search_range)},
  };

  std::vector<CandidateWindow> out;
  for (int s = 0; s < 2; ++s) {
    if (s == 1 && spans[1].lo == spans[0].lo && spans[1].hi == spans[0].hi) break;
    CandidateWindow w;
    w.chrom_index = locus.chrom_index;
    w.genome_start = spans[s].lo;
    w.genome_end = spans[s].hi;
    w.strand = locus.strand;
    std::string slice = chrom.substr(spans[s].lo, spans[s].hi - spans[s].lo);
    if (locus.strand == Strand::Forward) {
      w.sequence = std::move(slice);
      w.mirna_offset = static_cast<std::uint32_t>(start - spans[s].lo);
    } else {
      // Sense orientation: index x in the window reads genome position
      // (hi - 1 - x), so the mature span [start, end) lands at [hi-end,
      // hi-start).
      w.sequence = reverse_complement(slice);
      w.mirna_offset = static_cast<std::uint32_t>(spans[s].hi - end);
    }
    w.mirna_length = static_cast<std::uint32_t>(end - start);
    out.push_back(std::move(w));
  }
  return out;
}

std::string verdict_code(Verdict v) {
  switch (v) {
    case Verdict::Pending: return "PENDING";
    case Verdict::Pass: return "PASS";
    case Verdict::InLoop: return "IN_LOOP";
    case Verdict::UnpairedExcess: return "UNPAIRED_EXCESS";
    case Verdict::BulgeExcess: return "BULGE_EXCESS";
    case Verdict::StarUndefined: return "STAR_UNDEFINED";
    case Verdict::TooLong: return "TOO_LONG";
    case Verdict::SecondLoop: return "SECOND_LOOP";
    case Verdict::LowExpression: return "LOW_EXPRESSION";
    case Verdict::NotDominant: return "NOT_DOMINANT";
  }
  return "PENDING";
}

int verdict_depth(Verdict v) {
  switch (v) {
    case Verdict::Pending: return 0;
    case Verdict::InLoop: return 1;
    case Verdict::UnpairedExcess: return 2;
    case Verdict::BulgeExcess: return 3;
    case Verdict::StarUndefined: return 4;
    case Verdict::TooLong: return 5;
    case Verdict::SecondLoop: return 6;
    case Verdict::LowExpression: return 7;
    case Verdict::NotDominant: return 8;
    case Verdict::Pass: return 9;
  }
  return 0;
}

std::uint64_t PrecursorCandidate::precursor_genome_start() const {
  if (window.strand == Strand::Forward) return window.genome_start + trim_begin;
  return window.genome_end - trim_end;
}

std::uint64_t PrecursorCandidate::precursor_genome_end() const {
  if (window.strand == Strand::Forward) return window.genome_start + trim_end;
  return window.genome_end - trim_begin;
}

Verdict check_duplex(const PrecursorCandidate& c, const PipelineConfig& cfg) {
  const auto& pt = c.structure.pair_table;
  const std::int32_t n = static_cast<std::int32_t>(pt.size());
  const std::int32_t m0 = static_cast<std::int32_t>(c.window.mirna_offset);
  const std::int32_t m1 = m0 + static_cast<std::int32_t>(c.window.mirna_length);

  bool pairs_up = false, pairs_down = false;
  std::int32_t unpaired = 0, run = 0, max_run = 0;
  for (std::int32_t q = m0; q < m1; ++q) {
    if (pt[static_cast<std::size_t>(q)] < 0) {
      ++unpaired;
      ++run;
      max_run = std::max(max_run, run);
    } else {
      run = 0;
      (pt[static_cast<std::size_t>(q)] > q ? pairs_up : pairs_down) = true;
    }
  }
  // A single-arm region pairs in one direction only. Both directions means
  // the region straddles the loop apex; neither means it floats unpaired.
  if (pairs_up == pairs_down) return Verdict::InLoop;

  // An unpaired base whose nearest paired neighbours are partners of each
  // other sits inside a terminal hairpin loop.
  for (std::int32_t q = m0; q < m1; ++q) {
    if (pt[static_cast<std::size_t>(q)] >= 0) continue;
    std::int32_t l = q - 1;
    while (l >= 0 && pt[static_cast<std::size_t>(l)] < 0) --l;
    std::int32_t r = q + 1;
    while (r < n && pt[static_cast<std::size_t>(r)] < 0) ++r;
    if (l >= 0 && r < n && pt[static_cast<std::size_t>(l)] == r) return Verdict::InLoop;
  }

  if (unpaired > static_cast<std::int32_t>(cfg.duplex_max_unpaired))
    return Verdict::UnpairedExcess;
  if (max_run > static_cast<std::int32_t>(cfg.duplex_max_bulge)) return Verdict::BulgeExcess;
  return Verdict::Pass;
}

bool derive_star(PrecursorCandidate& c) {
  const auto& pt = c.structure.pair_table;
  const std::int64_t n = static_cast<std::int64_t>(pt.size());
  const std::int64_t m0 = c.window.mirna_offset;
  const std::int64_t m1 = m0 + c.window.mirna_length;

  // The star's outer end pairs opposite the mature's 3rd-from-last base
  // (leaving the mature a 2-nt 3' overhang); its inner end extends 2 nt
  // past the partner of the mature's 5' end (the star's own overhang).
  // Bulged anchors extrapolate from the nearest paired mature base.
  std::int64_t a = std::max(m1 - 3, m0);
  std::int64_t qa = -1;
  for (std::int64_t q = a; q >= m0; --q) {
    if (pt[static_cast<std::size_t>(q)] >= 0) {
      qa = q;
      break;
    }
  }
  std::int64_t qb = -1;
  for (std::int64_t q = m0; q < m1; ++q) {
    if (pt[static_cast<std::size_t>(q)] >= 0) {
      qb = q;
      break;
    }
  }
  if (qa < 0 || qb < 0) return false;

  const std::int64_t pa = pt[static_cast<std::size_t>(qa)] - (a - qa);
  const std::int64_t pb = pt[static_cast<std::size_t>(qb)] + (qb - m0) + 2;
  const std::int64_t lo = std::min(pa, pb);
  const std::int64_t hi = std::max(pa, pb);
  if (lo < 0 || hi >= n) return false;
  c.has_star = true;
  c.star_offset = static_cast<std::uint32_t>(lo);
  c.star_length = static_cast<std::uint32_t>(hi - lo + 1);
  return true;
}

void trim_to_hairpin(PrecursorCandidate& c, const PipelineConfig& cfg) {
  const auto& pt = c.structure.pair_table;
  const std::int32_t m0 = static_cast<std::int32_t>(c.window.mirna_offset);
  const std::int32_t m1 = m0 + static_cast<std::int32_t>(c.window.mirna_length);

  // Outermost pair of the mature's own duplex: the widest span touching
  // the mature region.
  std::int32_t i = -1, j = -1;
  for (std::int32_t q = m0; q < m1; ++q) {
    std::int32_t p = pt[static_cast<std::size_t>(q)];
    if (p < 0) continue;
    std::int32_t lo = std::min(q, p);
    std::int32_t hi = std::max(q, p);
    if (i < 0 || hi - lo > j - i) {
      i = lo;
      j = hi;
    }
  }
  if (i < 0) {
    c.trim_begin = static_cast<std::uint32_t>(m0);
    c.trim_end = static_cast<std::uint32_t>(m1);
    return;
  }

  // Climb to enclosing pairs while the stem stays unbranched and the
  // interior gaps stay small; wide gaps or sibling stems mean the local
  // hairpin has ended and the enclosing pairing is unrelated flank noise.
  const std::int32_t max_gap = static_cast<std::int32_t>(cfg.max_second_loop);
  for (;;) {
    std::int32_t p = i - 1;
    while (p >= 0 && pt[static_cast<std::size_t>(p)] < 0) --p;
    if (p < 0 || pt[static_cast<std::size_t>(p)] < i) break;  // edge or left sibling
    std::int32_t q = pt[static_cast<std::size_t>(p)];
    bool sibling = false;
    for (std::int32_t r = j + 1; r < q; ++r) {
      if (pt[static_cast<std::size_t>(r)] >= 0) {
        sibling = true;
        break;
      }
    }
    if (sibling) break;
    if (i - p - 1 > max_gap || q - j - 1 > max_gap) break;
    i = p;
    j = q;
  }
  c.trim_begin = static_cast<std::uint32_t>(std::min(i, m0));
  c.trim_end = static_cast<std::uint32_t>(std::max(j + 1, m1));
}

Verdict structural_gate(const PrecursorCandidate& c, const PipelineConfig& cfg) {
  if (c.trim_end - c.trim_begin > cfg.max_premirna_len) return Verdict::TooLong;

  const auto& pt = c.structure.pair_table;
  const std::int32_t m0 = static_cast<std::int32_t>(c.window.mirna_offset);
  const std::int32_t m1 = m0 + static_cast<std::int32_t>(c.window.mirna_length);

  // Innermost pair of the mature duplex, then descend through lone child
  // pairs to this stem's terminal loop. A branch point means there is no
  // single designated loop and nothing gets exempted below.
  std::int32_t a = -1, b = -1;
  for (std::int32_t q = m0; q < m1; ++q) {
    std::int32_t p = pt[static_cast<std::size_t>(q)];
    if (p < 0) continue;
    std::int32_t lo = std::min(q, p);
    std::int32_t hi = std::max(q, p);
    if (a < 0 || hi - lo < b - a) {
      a = lo;
      b = hi;
    }
  }
  std::int32_t loop_lo = -1, loop_hi = -1;
  while (a >= 0) {
    std::int32_t child = -1;
    bool multi = false;
    for (std::int32_t r = a + 1; r < b; ++r) {
      if (pt[static_cast<std::size_t>(r)] < 0) continue;
      if (child < 0 && pt[static_cast<std::size_t>(r)] > r) {
        child = r;
        r = pt[static_cast<std::size_t>(r)];
        continue;
      }
      multi = true;
      break;
    }
    if (multi) break;
    if (child < 0) {
      loop_lo = a + 1;
      loop_hi = b - 1;
      break;
    }
    b = pt[static_cast<std::size_t>(child)];
    a = child;
  }

  // Interior unpaired runs are loop/bulge sides; any side longer than
  // max_second_loop other than the terminal loop is a second loop. Runs
  // touching the trim boundary are dangling ends, not enclosed loops.
  const std::int32_t tb = static_cast<std::int32_t>(c.trim_begin);
  const std::int32_t te = static_cast<std::int32_t>(c.trim_end);
  std::int32_t r = tb;
  while (r < te) {
    if (pt[static_cast<std::size_t>(r)] >= 0) {
      ++r;
      continue;
    }
    const std::int32_t run_start = r;
    while (r < te && pt[static_cast<std::size_t>(r)] < 0) ++r;
    if (run_start == tb || r == te) continue;
    if (run_start == loop_lo && r - 1 == loop_hi) continue;
    if (r - run_start > static_cast<std::int32_t>(cfg.max_second_loop))
      return Verdict::SecondLoop;
  }
  return Verdict::Pass;
}

AlignedReference::AlignedReference(const std::vector<SmallRnaRecord>& aligned_records) {
  totals_.reserve(aligned_records.size());
  for (std::uint32_t ri = 0; ri < aligned_records.size(); ++ri) {
    const auto& rec = aligned_records[ri];
    const std::uint64_t total = rec.total_count();
    totals_.push_back(total);
    seq_totals_[rec.sequence] = total;
    for (const auto& l : rec.loci) {
      const std::uint64_t key =
          l.chrom_index * 2ull + (l.strand == Strand::Reverse ? 1 : 0);
      loci_[key].push_back({l.start, l.start + rec.sequence.size(), ri});
    }
  }
  for (auto& [key, v] : loci_) {
    (void)key;
    std::sort(v.begin(), v.end(), [](const LocusEntry& x, const LocusEntry& y) {
      return x.start != y.start ? x.start < y.start : x.end < y.end;
    });
  }
}

std::uint64_t AlignedReference::expression_in_span(std::uint32_t chrom_index, Strand strand,
                                                   std::uint64_t start,
                                                   std::uint64_t end) const {
  const std::uint64_t key = chrom_index * 2ull + (strand == Strand::Reverse ? 1 : 0);
  auto it = loci_.find(key);
  if (it == loci_.end()) return 0;
  const auto& v = it->second;
  auto first = std::lower_bound(
      v.begin(), v.end(), start,
      [](const LocusEntry& e, std::uint64_t s) { return e.start < s; });
  // A record with several loci inside the span still contributes its total
  // only once.
  std::vector<std::uint32_t> recs;
  for (auto e = first; e != v.end() && e->start < end; ++e) {
    if (e->end <= end) recs.push_back(e->record_index);
  }
  std::sort(recs.begin(), recs.end());
  recs.erase(std::unique(recs.begin(), recs.end()), recs.end());
  std::uint64_t sum = 0;
  for (auto ri : recs) sum += totals_[ri];
  return sum;
}

std::uint64_t AlignedReference::total_of_sequence(const std::string& seq) const {
  auto it = seq_totals_.find(seq);
  return it == seq_totals_.end() ? 0 : it->second;
}

Verdict dominance_check(const PrecursorCandidate& c, std::uint64_t mature_total,
                        const AlignedReference& ref, const PipelineConfig& cfg) {
  if (mature_total < cfg.min_mirna_freq) return Verdict::LowExpression;
  const std::uint64_t expressed = ref.expression_in_span(
      c.window.chrom_index, c.window.strand, c.precursor_genome_start(),
      c.precursor_genome_end());
  std::uint64_t mirna = mature_total;
  if (c.has_star) mirna += ref.total_of_sequence(c.star_sequence());
  if (expressed == 0) return Verdict::NotDominant;
  const double ratio = static_cast<double>(mirna) / static_cast<double>(expressed);
  if (ratio < cfg.dominance_threshold) return Verdict::NotDominant;
  return Verdict::Pass;
}

PrecursorCandidate evaluate_candidate(CandidateWindow window, std::uint64_t mature_total,
                                      const AlignedReference& ref, const PipelineConfig& cfg) {
  PrecursorCandidate c;
  c.window = std::move(window);
  c.structure = fold(c.window.sequence);
  c.trim_begin = 0;
  c.trim_end = static_cast<std::uint32_t>(c.window.sequence.size());

  Verdict v = check_duplex(c, cfg);
  if (v != Verdict::Pass) {
    c.verdict = v;
    return c;
  }
  if (!derive_star(c)) {
    c.verdict = Verdict::StarUndefined;
    return c;
  }
  trim_to_hairpin(c, cfg);
  v = structural_gate(c, cfg);
  if (v != Verdict::Pass) {
    c.verdict = v;
    return c;
  }
  c.verdict = dominance_check(c, mature_total, ref, cfg);
  return c;
}

}  // namespace mirflow
