// Library ingestion in the four supported read formats, guide-file parsing,
// and the genome/pathway flat-file loaders.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mirflow/genome.hpp"
#include "mirflow/sequence.hpp"

namespace mirflow {

enum class LibraryFormat { TsvReadcount, Reads, Fasta, Fastq };

// Accepts "tsv", "tsv_readcount", "reads", "fasta", "fastq" (case-insensitive).
LibraryFormat parse_library_format(const std::string& name);
std::string library_format_name(LibraryFormat f);

struct LibraryInput {
  std::string library_id;  // file stem by convention
  LibraryFormat format = LibraryFormat::Reads;
  std::string path;
};

// Reads one library and collapses identical sequences. Each returned record
// carries a single-entry counts vector. Reads that fail strict ACGTU
// normalization (e.g. contain N) are skipped; only structural problems
// raise ParseError. Records appear in first-occurrence order.
std::vector<SmallRnaRecord> read_library(const LibraryInput& input);
std::vector<SmallRnaRecord> read_library(std::istream& in, LibraryFormat format,
                                         const std::string& display_path);

// Aligns per-library collapsed records into merged records whose counts
// vector is indexed by library position. Output sorted by sequence.
std::vector<SmallRnaRecord> merge_libraries(
    const std::vector<std::vector<SmallRnaRecord>>& per_library);

struct GuidePair {
  std::string experiment;
  std::string control;
};

// First line must be exactly "Experiment->Control"; each further non-empty
// line is "EXPT->CTRL". The overload taking known ids additionally rejects
// pairs naming libraries outside the run.
std::vector<GuidePair> parse_guide_file(std::istream& in);
std::vector<GuidePair> parse_guide_file(const std::string& path,
                                        const std::vector<std::string>& known_ids);

// Multi-record nucleotide fasta. Sequences are uppercased with U folded to
// T; N is retained (the index never matches through it). Record ids take
// the header up to the first whitespace.
Genome load_genome(const std::string& path);
Genome load_genome(std::istream& in);

struct PathwayMap {
  std::map<std::string, std::vector<std::string>> gene_pathways;  // gene -> sorted pathway ids
  std::map<std::string, std::string> pathway_names;

  std::size_t gene_count() const { return gene_pathways.size(); }
};

// Two tab-separated columns per line: gene_id, pathway_id:pathway_name.
// Repeated gene/pathway rows accumulate; the first name seen for a pathway
// wins. '#' lines are comments.
PathwayMap load_pathways(const std::string& path);
PathwayMap load_pathways(std::istream& in);

}  // namespace mirflow
