#include "mirflow/genome_index.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string_view>

#include "mirflow/errors.hpp"

namespace mirflow {

namespace {

// Prefix doubling with counting sort per round: O(n log n) total, and
// fully deterministic.
std::vector<std::uint32_t> build_suffix_array(const std::string& text) {
  const std::size_t n = text.size();
  std::vector<std::uint32_t> sa(n), rnk(n), tmp(n);
  if (n == 0) return sa;

  {
    std::array<std::uint32_t, 256> cnt{};
    for (unsigned char c : text) ++cnt[c];
    std::array<std::uint32_t, 256> pos{};
    std::uint32_t sum = 0;
    for (std::size_t c = 0; c < 256; ++c) {
      pos[c] = sum;
      sum += cnt[c];
    }
    for (std::size_t i = 0; i < n; ++i)
      sa[pos[static_cast<unsigned char>(text[i])]++] = static_cast<std::uint32_t>(i);
    rnk[sa[0]] = 0;
    for (std::size_t i = 1; i < n; ++i)
      rnk[sa[i]] = rnk[sa[i - 1]] + (text[sa[i]] != text[sa[i - 1]] ? 1 : 0);
  }

  std::vector<std::uint32_t> order(n), cnt(n), pos(n);
  for (std::size_t k = 1; k < n; k <<= 1) {
    if (rnk[sa[n - 1]] == n - 1) break;  // every suffix already distinct

    // Sort by the second key (rank at i+k): suffixes whose second half is
    // empty sort first, the rest keep their current order shifted by k.
    std::size_t filled = 0;
    for (std::size_t i = n - k; i < n; ++i) order[filled++] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < n; ++i) {
      if (sa[i] >= k) order[filled++] = sa[i] - static_cast<std::uint32_t>(k);
    }

    // Stable counting sort by the first key.
    std::fill(cnt.begin(), cnt.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++cnt[rnk[i]];
    std::uint32_t sum = 0;
    for (std::size_t r = 0; r < n; ++r) {
      pos[r] = sum;
      sum += cnt[r];
    }
    for (std::size_t i = 0; i < n; ++i) sa[pos[rnk[order[i]]]++] = order[i];

    tmp[sa[0]] = 0;
    for (std::size_t i = 1; i < n; ++i) {
      std::uint32_t a = sa[i - 1], b = sa[i];
      std::uint64_t a2 = a + k < n ? rnk[a + k] + 1 : 0;
      std::uint64_t b2 = b + k < n ? rnk[b + k] + 1 : 0;
      bool differs = rnk[a] != rnk[b] || a2 != b2;
      tmp[b] = tmp[a] + (differs ? 1 : 0);
    }
    rnk.swap(tmp);
  }
  return sa;
}

constexpr char kMagic[4] = {'M', 'F', 'I', 'X'};
constexpr std::uint32_t kIndexVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& v, const std::string& path) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("truncated index file " + path);
}

}  // namespace

void GenomeIndex::rebuild_text(const Genome& genome) {
  std::size_t total = 0;
  for (const auto& s : genome.seqs) total += s.size() + 1;
  if (total >= std::numeric_limits<std::uint32_t>::max())
    throw IoError("genome too large for a 32-bit suffix array");

  text_.clear();
  text_.reserve(total);
  chrom_offsets_.clear();
  chrom_lengths_.clear();
  for (const auto& s : genome.seqs) {
    chrom_offsets_.push_back(text_.size());
    chrom_lengths_.push_back(s.size());
    text_ += s;
    text_ += '#';
  }
  genome_hash_ = genome.content_hash();
}

GenomeIndex GenomeIndex::build(const Genome& genome) {
  GenomeIndex idx;
  idx.rebuild_text(genome);
  idx.sa_ = build_suffix_array(idx.text_);
  return idx;
}

std::vector<Locus> GenomeIndex::locate(const std::string& query) const {
  std::vector<Locus> hits;
  if (!is_acgt(query) || text_.empty()) return hits;

  std::string_view text(text_);
  auto scan_strand = [&](const std::string& q, Strand strand) {
    auto lo = std::lower_bound(sa_.begin(), sa_.end(), q,
                               [&](std::uint32_t p, const std::string& needle) {
                                 return text.substr(p, needle.size()) < needle;
                               });
    auto hi = std::upper_bound(lo, sa_.end(), q,
                               [&](const std::string& needle, std::uint32_t p) {
                                 return needle < text.substr(p, needle.size());
                               });
    for (auto it = lo; it != hi; ++it) {
      std::uint64_t p = *it;
      // Greatest chromosome offset <= p.
      auto ch = std::upper_bound(chrom_offsets_.begin(), chrom_offsets_.end(), p) -
                chrom_offsets_.begin() - 1;
      Locus l;
      l.chrom_index = static_cast<std::uint32_t>(ch);
      l.start = p - chrom_offsets_[static_cast<std::size_t>(ch)];
      l.strand = strand;
      hits.push_back(l);
    }
  };

  scan_strand(query, Strand::Forward);
  std::string rc = reverse_complement(query);
  // A palindromic query has identical forward and reverse-complement text
  // matches; both strands are still reported, as a real aligner would.
  scan_strand(rc, Strand::Reverse);

  std::sort(hits.begin(), hits.end());
  return hits;
}

void GenomeIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write index file " + path);
  out.write(kMagic, 4);
  write_pod(out, kIndexVersion);
  write_pod(out, genome_hash_);
  std::uint64_t n = sa_.size();
  write_pod(out, n);
  if (n > 0)
    out.write(reinterpret_cast<const char*>(sa_.data()),
              static_cast<std::streamsize>(n * sizeof(std::uint32_t)));
  if (!out) throw IoError("failed writing index file " + path);
}

GenomeIndex GenomeIndex::load(const std::string& path, const Genome& genome) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open index file " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw IndexMismatch("not an index file: " + path);
  std::uint32_t version = 0;
  read_pod(in, version, path);
  if (version != kIndexVersion)
    throw IndexMismatch("unsupported index version in " + path);
  std::uint64_t hash = 0;
  read_pod(in, hash, path);
  if (hash != genome.content_hash())
    throw IndexMismatch("index was built for a different genome: " + path);

  GenomeIndex idx;
  idx.rebuild_text(genome);
  std::uint64_t n = 0;
  read_pod(in, n, path);
  if (n != idx.text_.size()) throw IndexMismatch("index size disagrees with genome: " + path);
  idx.sa_.resize(n);
  if (n > 0) {
    in.read(reinterpret_cast<char*>(idx.sa_.data()),
            static_cast<std::streamsize>(n * sizeof(std::uint32_t)));
    if (!in) throw IoError("truncated index file " + path);
  }
  return idx;
}

GenomeIndex GenomeIndex::load_or_build(const Genome& genome, const std::string& cache_path) {
  try {
    return load(cache_path, genome);
  } catch (const PipelineError&) {
    GenomeIndex idx = build(genome);
    idx.save(cache_path);
    return idx;
  }
}

}  // namespace mirflow
