#include "mirflow/sequence.hpp"

#include <array>
#include <cctype>

#include "mirflow/errors.hpp"

namespace mirflow {

namespace {

constexpr std::array<char, 256> make_normalize_table() {
  std::array<char, 256> t{};
  for (int i = 0; i < 256; ++i) t[i] = 0;
  t['A'] = t['a'] = 'A';
  t['C'] = t['c'] = 'C';
  t['G'] = t['g'] = 'G';
  t['T'] = t['t'] = 'T';
  t['U'] = t['u'] = 'T';
  return t;
}

constexpr std::array<char, 256> kNormalize = make_normalize_table();

constexpr std::array<char, 256> make_complement_table() {
  std::array<char, 256> t{};
  for (int i = 0; i < 256; ++i) t[i] = 0;
  t['A'] = 'T';
  t['C'] = 'G';
  t['G'] = 'C';
  t['T'] = 'A';
  t['N'] = 'N';
  return t;
}

constexpr std::array<char, 256> kComplement = make_complement_table();

}  // namespace

std::string normalize_sequence(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char mapped = kNormalize[static_cast<unsigned char>(raw[i])];
    if (mapped == 0) throw InvalidBase(i, raw[i]);
    out.push_back(mapped);
  }
  return out;
}

bool is_acgt(const std::string& seq) {
  if (seq.empty()) return false;
  for (char c : seq) {
    if (c != 'A' && c != 'C' && c != 'G' && c != 'T') return false;
  }
  return true;
}

std::string reverse_complement(const std::string& seq) {
  std::string out;
  out.resize(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    char c = kComplement[static_cast<unsigned char>(seq[seq.size() - 1 - i])];
    out[i] = c == 0 ? 'N' : c;
  }
  return out;
}

}  // namespace mirflow
