#include "mirflow/annotation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>

#include "mirflow/errors.hpp"

namespace mirflow {

namespace {

bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ++line_no;
  return true;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string to_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::uint64_t parse_coord(const std::string& field, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    if (field.empty() || field[0] == '-') throw std::invalid_argument("negative");
    std::uint64_t v = std::stoull(field, &pos);
    if (pos != field.size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    throw ParseError(line_no, "bad coordinate '" + field + "'");
  }
}

}  // namespace

FeatureClass parse_feature_class(const std::string& name) {
  std::string n = to_lower(trim(name));
  if (n == "cds") return FeatureClass::Cds;
  if (n == "rrna") return FeatureClass::RRna;
  if (n == "snorna") return FeatureClass::SnoRna;
  if (n == "snrna") return FeatureClass::SnRna;
  if (n == "trna") return FeatureClass::TRna;
  return FeatureClass::Other;
}

std::string feature_class_name(FeatureClass c) {
  switch (c) {
    case FeatureClass::Cds: return "CDS";
    case FeatureClass::RRna: return "rRNA";
    case FeatureClass::SnoRna: return "snoRNA";
    case FeatureClass::SnRna: return "snRNA";
    case FeatureClass::TRna: return "tRNA";
    case FeatureClass::Other: return "other";
  }
  return "other";
}

std::vector<FeatureAnnotation> load_annotations(std::istream& in) {
  std::vector<FeatureAnnotation> out;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line, line_no)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      std::size_t tab = t.find('\t', pos);
      if (tab == std::string::npos) {
        fields.push_back(t.substr(pos));
        break;
      }
      fields.push_back(t.substr(pos, tab - pos));
      pos = tab + 1;
    }
    if (fields.size() != 4)
      throw ParseError(line_no, "expected 4 columns: chrom, start, end, class");
    FeatureAnnotation a;
    a.chrom = trim(fields[0]);
    a.start = parse_coord(trim(fields[1]), line_no);
    a.end = parse_coord(trim(fields[2]), line_no);
    a.feature_class = parse_feature_class(fields[3]);
    if (a.chrom.empty()) throw ParseError(line_no, "empty chromosome id");
    if (a.start >= a.end) throw ParseError(line_no, "interval start must be < end");
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<FeatureAnnotation> load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open annotation file " + path);
  return load_annotations(in);
}

AnnotationIndex::AnnotationIndex(const Genome& genome,
                                 const std::vector<FeatureAnnotation>& annotations) {
  per_chrom_.resize(genome.size());
  for (const auto& a : annotations) {
    if (a.feature_class == FeatureClass::Other) continue;
    std::size_t idx = genome.find(a.chrom);
    if (idx == Genome::npos) continue;
    per_chrom_[idx].push_back({a.start, a.end});
  }
  for (auto& intervals : per_chrom_) {
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& x, const Interval& y) {
                return x.start != y.start ? x.start < y.start : x.end < y.end;
              });
    // Merge to disjoint intervals so a single binary search answers overlap.
    std::vector<Interval> merged;
    for (const auto& iv : intervals) {
      if (!merged.empty() && iv.start <= merged.back().end)
        merged.back().end = std::max(merged.back().end, iv.end);
      else
        merged.push_back(iv);
    }
    intervals = std::move(merged);
  }
}

bool AnnotationIndex::overlaps_excluded(std::uint32_t chrom_index, std::uint64_t start,
                                        std::uint64_t end) const {
  if (chrom_index >= per_chrom_.size()) return false;
  const auto& intervals = per_chrom_[chrom_index];
  // First interval whose end exceeds the query start; with disjoint sorted
  // intervals it is the only possible overlapper candidate.
  auto it = std::upper_bound(intervals.begin(), intervals.end(), start,
                             [](std::uint64_t s, const Interval& iv) { return s < iv.end; });
  return it != intervals.end() && it->start < end;
}

std::size_t AnnotationIndex::interval_count() const {
  std::size_t n = 0;
  for (const auto& v : per_chrom_) n += v.size();
  return n;
}

}  // namespace mirflow
