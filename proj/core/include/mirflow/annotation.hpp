// Feature annotations used to exclude known non-miRNA loci.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mirflow/genome.hpp"

namespace mirflow {

enum class FeatureClass { Cds, RRna, SnoRna, SnRna, TRna, Other };

// "CDS", "rRNA", "snoRNA", "snRNA", "tRNA" (case-insensitive); anything
// else maps to Other and is never excluded.
FeatureClass parse_feature_class(const std::string& name);
std::string feature_class_name(FeatureClass c);

struct FeatureAnnotation {
  std::string chrom;
  std::uint64_t start = 0;  // 0-based half-open
  std::uint64_t end = 0;
  FeatureClass feature_class = FeatureClass::Other;
};

// Four tab-separated columns: chrom, start, end, class. '#' lines are
// comments. start must be < end.
std::vector<FeatureAnnotation> load_annotations(const std::string& path);
std::vector<FeatureAnnotation> load_annotations(std::istream& in);

// Disjoint sorted excluded intervals per chromosome, for O(log n) overlap
// queries. Only the five excluded classes are kept; annotations naming
// chromosomes absent from the genome are ignored.
class AnnotationIndex {
 public:
  AnnotationIndex() = default;
  AnnotationIndex(const Genome& genome, const std::vector<FeatureAnnotation>& annotations);

  // True iff [start, end) on the chromosome overlaps an excluded interval
  // by at least one base. Strand-agnostic.
  bool overlaps_excluded(std::uint32_t chrom_index, std::uint64_t start,
                         std::uint64_t end) const;

  std::size_t interval_count() const;

 private:
  struct Interval {
    std::uint64_t start;
    std::uint64_t end;
  };
  std::vector<std::vector<Interval>> per_chrom_;
};

}  // namespace mirflow
