#include "mirflow/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "mirflow/errors.hpp"

namespace mirflow {

namespace {

// getline with CRLF tolerance: a trailing '\r' is stripped.
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

// Accumulates collapsed counts keyed by normalized sequence while keeping
// first-occurrence order for deterministic downstream partitioning.
class Collapser {
 public:
  void add(const std::string& raw, std::uint64_t count) {
    if (count == 0) return;
    std::string seq;
    try {
      seq = normalize_sequence(raw);
    } catch (const InvalidBase&) {
      return;  // unusable read, not a file-format problem
    }
    if (seq.empty()) return;
    auto [it, inserted] = index_.try_emplace(seq, order_.size());
    if (inserted) {
      order_.push_back(seq);
      counts_.push_back(count);
    } else {
      counts_[it->second] += count;
    }
  }

  std::vector<SmallRnaRecord> take(const std::string& display_path) {
    if (order_.empty()) throw EmptyLibrary(display_path);
    std::vector<SmallRnaRecord> out;
    out.reserve(order_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) {
      SmallRnaRecord r;
      r.sequence = std::move(order_[i]);
      r.counts = {counts_[i]};
      out.push_back(std::move(r));
    }
    return out;
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> order_;
  std::vector<std::uint64_t> counts_;
};

void read_tsv_readcount(std::istream& in, Collapser& c) {
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line, line_no)) {
    if (trim(line).empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError(line_no, "expected sequence<TAB>count");
    std::string seq = line.substr(0, tab);
    std::string count_str = trim(line.substr(tab + 1));
    if (count_str.find('\t') != std::string::npos)
      throw ParseError(line_no, "expected exactly two columns");
    std::uint64_t count = 0;
    try {
      std::size_t pos = 0;
      if (count_str.empty() || count_str[0] == '-') throw std::invalid_argument("negative");
      count = std::stoull(count_str, &pos);
      if (pos != count_str.size()) throw std::invalid_argument("junk");
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad count '" + count_str + "'");
    }
    c.add(seq, count);
  }
}

void read_raw_reads(std::istream& in, Collapser& c) {
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line, line_no)) {
    std::string seq = trim(line);
    if (seq.empty()) continue;
    c.add(seq, 1);
  }
}

void read_fasta_reads(std::istream& in, Collapser& c) {
  std::string line;
  std::size_t line_no = 0;
  bool has_record = false;
  std::string current;
  while (next_line(in, line, line_no)) {
    if (!line.empty() && line[0] == '>') {
      if (has_record) c.add(current, 1);
      has_record = true;
      current.clear();
      continue;
    }
    std::string chunk = trim(line);
    if (chunk.empty()) continue;
    if (!has_record) throw ParseError(line_no, "sequence data before first fasta header");
    current += chunk;
  }
  if (has_record) c.add(current, 1);
}

void read_fastq_reads(std::istream& in, Collapser& c) {
  std::string header, seq, sep, qual;
  std::size_t line_no = 0;
  while (next_line(in, header, line_no)) {
    if (trim(header).empty()) continue;
    if (header[0] != '@')
      throw ParseError(line_no, "fastq record must start with '@'");
    if (!next_line(in, seq, line_no)) throw ParseError(line_no, "truncated fastq record");
    if (!next_line(in, sep, line_no)) throw ParseError(line_no, "truncated fastq record");
    if (sep.empty() || sep[0] != '+')
      throw ParseError(line_no, "fastq separator line must start with '+'");
    if (!next_line(in, qual, line_no)) throw ParseError(line_no, "truncated fastq record");
    c.add(trim(seq), 1);
  }
}

}  // namespace

LibraryFormat parse_library_format(const std::string& name) {
  std::string n = to_lower(trim(name));
  if (n == "tsv" || n == "tsv_readcount" || n == "readcount") return LibraryFormat::TsvReadcount;
  if (n == "reads") return LibraryFormat::Reads;
  if (n == "fasta" || n == "fa") return LibraryFormat::Fasta;
  if (n == "fastq" || n == "fq") return LibraryFormat::Fastq;
  throw ConfigError("unknown library format '" + name + "'");
}

std::string library_format_name(LibraryFormat f) {
  switch (f) {
    case LibraryFormat::TsvReadcount: return "tsv_readcount";
    case LibraryFormat::Reads: return "reads";
    case LibraryFormat::Fasta: return "fasta";
    case LibraryFormat::Fastq: return "fastq";
  }
  return "unknown";
}

std::vector<SmallRnaRecord> read_library(std::istream& in, LibraryFormat format,
                                         const std::string& display_path) {
  Collapser c;
  switch (format) {
    case LibraryFormat::TsvReadcount: read_tsv_readcount(in, c); break;
    case LibraryFormat::Reads: read_raw_reads(in, c); break;
    case LibraryFormat::Fasta: read_fasta_reads(in, c); break;
    case LibraryFormat::Fastq: read_fastq_reads(in, c); break;
  }
  return c.take(display_path);
}

std::vector<SmallRnaRecord> read_library(const LibraryInput& input) {
  std::ifstream in(input.path);
  if (!in) throw IoError("cannot open library file " + input.path);
  return read_library(in, input.format, input.path);
}

std::vector<SmallRnaRecord> merge_libraries(
    const std::vector<std::vector<SmallRnaRecord>>& per_library) {
  std::size_t n_libs = per_library.size();
  std::map<std::string, std::vector<std::uint64_t>> merged;
  for (std::size_t lib = 0; lib < n_libs; ++lib) {
    for (const auto& rec : per_library[lib]) {
      auto [it, inserted] = merged.try_emplace(rec.sequence);
      if (inserted) it->second.assign(n_libs, 0);
      it->second[lib] += rec.counts.at(0);
    }
  }
  std::vector<SmallRnaRecord> out;
  out.reserve(merged.size());
  for (auto& [seq, counts] : merged) {
    SmallRnaRecord r;
    r.sequence = seq;
    r.counts = std::move(counts);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<GuidePair> parse_guide_file(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no) || trim(line) != "Experiment->Control")
    throw BadHeader("guide file must start with the line 'Experiment->Control'");

  std::vector<GuidePair> pairs;
  while (next_line(in, line, line_no)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    std::size_t arrow = t.find("->");
    if (arrow == std::string::npos)
      throw BadPairLine(line_no, "expected EXPT->CTRL, got '" + t + "'");
    GuidePair p;
    p.experiment = trim(t.substr(0, arrow));
    p.control = trim(t.substr(arrow + 2));
    if (p.experiment.empty() || p.control.empty())
      throw BadPairLine(line_no, "empty library id in '" + t + "'");
    if (p.experiment == p.control)
      throw BadPairLine(line_no, "experiment equals control");
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<GuidePair> parse_guide_file(const std::string& path,
                                        const std::vector<std::string>& known_ids) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open guide file " + path);
  auto pairs = parse_guide_file(in);
  for (const auto& p : pairs) {
    for (const auto& id : {p.experiment, p.control}) {
      if (std::find(known_ids.begin(), known_ids.end(), id) == known_ids.end())
        throw UnknownLibrary(id);
    }
  }
  return pairs;
}

namespace {

// Genome alphabet is wider than the read alphabet: N survives as a
// never-matching placeholder.
char genome_base(char c, std::size_t line_no) {
  switch (c) {
    case 'A': case 'a': return 'A';
    case 'C': case 'c': return 'C';
    case 'G': case 'g': return 'G';
    case 'T': case 't': return 'T';
    case 'U': case 'u': return 'T';
    case 'N': case 'n': return 'N';
    default:
      throw ParseError(line_no, std::string("invalid genome base '") + c + "'");
  }
}

}  // namespace

Genome load_genome(std::istream& in) {
  Genome g;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool has_record = false;
  while (next_line(in, line, line_no)) {
    if (!line.empty() && line[0] == '>') {
      std::string header = trim(line.substr(1));
      std::string id = header.substr(0, header.find_first_of(" \t"));
      if (id.empty()) throw ParseError(line_no, "empty fasta record id");
      if (!seen.insert(id).second) throw DuplicateChrom(id);
      g.names.push_back(id);
      g.seqs.emplace_back();
      has_record = true;
      continue;
    }
    std::string chunk = trim(line);
    if (chunk.empty()) continue;
    if (!has_record) throw ParseError(line_no, "sequence data before first fasta header");
    std::string& dst = g.seqs.back();
    dst.reserve(dst.size() + chunk.size());
    for (char c : chunk) dst.push_back(genome_base(c, line_no));
  }
  if (g.names.empty()) throw ParseError(line_no, "no fasta records");
  return g;
}

Genome load_genome(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open fasta file " + path);
  return load_genome(in);
}

PathwayMap load_pathways(std::istream& in) {
  PathwayMap pm;
  std::map<std::string, std::set<std::string>> gene_sets;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line, line_no)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t tab = t.find('\t');
    if (tab == std::string::npos)
      throw ParseError(line_no, "expected gene_id<TAB>pathway_id:pathway_name");
    std::string gene = trim(t.substr(0, tab));
    std::string rest = trim(t.substr(tab + 1));
    std::size_t colon = rest.find(':');
    if (colon == std::string::npos)
      throw ParseError(line_no, "pathway column must be pathway_id:pathway_name");
    std::string pid = trim(rest.substr(0, colon));
    std::string pname = trim(rest.substr(colon + 1));
    if (gene.empty() || pid.empty())
      throw ParseError(line_no, "empty gene or pathway id");
    gene_sets[gene].insert(pid);
    pm.pathway_names.try_emplace(pid, pname);
  }
  for (auto& [gene, ids] : gene_sets)
    pm.gene_pathways[gene] = std::vector<std::string>(ids.begin(), ids.end());
  return pm;
}

PathwayMap load_pathways(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pathway file " + path);
  return load_pathways(in);
}

}  // namespace mirflow
