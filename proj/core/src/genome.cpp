#include "mirflow/genome.hpp"

namespace mirflow {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_mix(std::uint64_t& h, const std::string& s) {
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  h ^= 0xff;  // separator keeps ("ab","c") distinct from ("a","bc")
  h *= kFnvPrime;
}

}  // namespace

std::uint64_t Genome::total_length() const {
  std::uint64_t n = 0;
  for (const auto& s : seqs) n += s.size();
  return n;
}

std::size_t Genome::find(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  return npos;
}

std::uint64_t Genome::content_hash() const {
  std::uint64_t h = kFnvOffset;
  for (std::size_t i = 0; i < names.size(); ++i) {
    fnv_mix(h, names[i]);
    fnv_mix(h, seqs[i]);
  }
  return h;
}

}  // namespace mirflow
