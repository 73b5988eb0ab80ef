// In-memory reference genome: parallel name/sequence arrays in file order.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mirflow {

struct Genome {
  std::vector<std::string> names;
  std::vector<std::string> seqs;  // uppercase DNA, may contain N

  std::size_t size() const { return names.size(); }
  std::uint64_t total_length() const;

  // Index of a chromosome by name, or npos when absent.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find(const std::string& name) const;

  // FNV-1a over names and sequences (with separators), stable across runs.
  // Used to detect a stale on-disk index.
  std::uint64_t content_hash() const;
};

}  // namespace mirflow
