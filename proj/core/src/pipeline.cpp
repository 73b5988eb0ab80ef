// The staged run: ingest -> prefilter -> align -> locus gates -> windows ->
// hairpin evaluation -> predictions, then the optional statistics layers.
// Output rows follow the dataset order, which is worker-count independent.
#include "mirflow/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mirflow/annotation.hpp"
#include "mirflow/dataflow.hpp"
#include "mirflow/errors.hpp"
#include "mirflow/genome_index.hpp"
#include "mirflow/prefilter.hpp"
#include "mirflow/stats.hpp"
#include "mirflow/targets.hpp"
#include "mirflow/version.hpp"

namespace mirflow {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_seconds(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::ofstream open_output(const std::string& dir, const std::string& name,
                          std::vector<std::string>& written) {
  const std::filesystem::path p = std::filesystem::path(dir) / name;
  std::ofstream out(p);
  if (!out) throw IoError("cannot write " + p.string());
  written.push_back(name);
  return out;
}

// The mature's genomic locus recovered from a window: both windows of one
// locus agree on it.
Locus locus_of_window(const CandidateWindow& w) {
  Locus l;
  l.chrom_index = w.chrom_index;
  l.strand = w.strand;
  l.start = w.strand == Strand::Forward
                ? w.genome_start + w.mirna_offset
                : w.genome_end - w.mirna_offset - w.mirna_length;
  return l;
}

struct CandidateTask {
  SmallRnaRecord record;
  CandidateWindow window;
};

struct EvaluatedCandidate {
  SmallRnaRecord record;
  PrecursorCandidate candidate;
};

struct SpanKey {
  std::uint32_t chrom;
  std::uint8_t strand;
  std::uint64_t start;
  std::uint64_t end;
  bool operator<(const SpanKey& o) const {
    if (chrom != o.chrom) return chrom < o.chrom;
    if (start != o.start) return start < o.start;
    if (end != o.end) return end < o.end;
    return strand < o.strand;
  }
};

SpanKey span_key(const PrecursorCandidate& c) {
  return {c.window.chrom_index, static_cast<std::uint8_t>(c.window.strand == Strand::Reverse),
          c.precursor_genome_start(), c.precursor_genome_end()};
}

void write_predictions_file(const RunManifest& m, const RunResult& r,
                            std::vector<std::string>& written) {
  std::ofstream out = open_output(m.out_dir, "mirna_predictions.tsv", written);
  out << "mirna\tlength\ttotal_count\tn_loci\tn_precursors\n";
  for (const auto& p : r.predictions) {
    out << p.mature << '\t' << p.mature.size() << '\t' << p.total << '\t' << p.loci.size()
        << '\t' << p.precursors.size() << '\n';
  }
}

void write_loci_file(const RunManifest& m, const RunResult& r, const Genome& genome,
                     std::vector<std::string>& written) {
  std::ofstream out = open_output(m.out_dir, "mirna_loci.tsv", written);
  out << "mirna\tchrom\tstart\tend\tstrand\n";
  for (const auto& p : r.predictions) {
    for (const auto& l : p.loci) {
      out << p.mature << '\t' << genome.names[l.chrom_index] << '\t' << l.start << '\t'
          << l.start + p.mature.size() << '\t' << strand_char(l.strand) << '\n';
    }
  }
}

void write_precursors_file(const RunManifest& m, const RunResult& r, const Genome& genome,
                           std::vector<std::string>& written) {
  std::ofstream out = open_output(m.out_dir, "precursors.tsv", written);
  out << "mirna\tchrom\tstrand\twindow_start\twindow_end\tprecursor_start\tprecursor_end"
         "\tverdict\tstructure\n";
  for (const auto& row : r.candidates) {
    const auto& c = row.candidate;
    out << row.mature << '\t' << genome.names[c.window.chrom_index] << '\t'
        << strand_char(c.window.strand) << '\t' << c.window.genome_start << '\t'
        << c.window.genome_end << '\t' << c.precursor_genome_start() << '\t'
        << c.precursor_genome_end() << '\t' << verdict_code(c.verdict) << '\t'
        << c.structure.dot_bracket.substr(c.trim_begin, c.trim_end - c.trim_begin) << '\n';
  }
}

void write_star_file(const RunManifest& m, const RunResult& r, const Genome& genome,
                     std::vector<std::string>& written) {
  std::ofstream out = open_output(m.out_dir, "mirna_star.tsv", written);
  out << "mirna\tstar\tchrom\tstrand\tprecursor_start\tprecursor_end\n";
  for (const auto& p : r.predictions) {
    for (const auto& c : p.precursors) {
      out << p.mature << '\t' << c.star_sequence() << '\t' << genome.names[c.window.chrom_index]
          << '\t' << strand_char(c.window.strand) << '\t' << c.precursor_genome_start() << '\t'
          << c.precursor_genome_end() << '\n';
    }
  }
}

void write_expression_files(const RunManifest& m, const RunResult& r,
                            std::vector<std::string>& written) {
  std::ofstream counts = open_output(m.out_dir, "expression_counts.tsv", written);
  std::ofstream rpm = open_output(m.out_dir, "expression_rpm.tsv", written);
  counts << "mirna";
  rpm << "mirna";
  for (const auto& lib : m.libraries) {
    counts << '\t' << lib.library_id;
    rpm << '\t' << lib.library_id;
  }
  counts << '\n';
  rpm << '\n';
  for (const auto& p : r.predictions) {
    counts << p.mature;
    rpm << p.mature;
    for (std::size_t l = 0; l < m.libraries.size(); ++l) {
      counts << '\t' << p.counts[l];
      const double denom = static_cast<double>(r.mapped_totals[l]);
      const double v = denom > 0.0 ? static_cast<double>(p.counts[l]) * 1e6 / denom : 0.0;
      rpm << '\t' << fmt_double(v);
    }
    counts << '\n';
    rpm << '\n';
  }
}

void write_library_summary(const RunManifest& m, const RunResult& r,
                           std::vector<std::string>& written) {
  std::ofstream out = open_output(m.out_dir, "library_summary.tsv", written);
  out << "library_id\tformat\ttotal_reads\tdistinct_reads\tmapped_reads\n";
  for (const auto& s : r.library_stats) {
    out << s.library_id << '\t' << s.format << '\t' << s.total_reads << '\t' << s.distinct_reads
        << '\t' << s.mapped_reads << '\n';
  }
}

void write_run_summary(const RunManifest& m, const RunResult& r, const Genome& genome,
                       std::size_t window_count, std::vector<std::string>& written) {
  std::ofstream out = open_output(m.out_dir, "run_summary.tsv", written);
  out << "key\tvalue\n";
  out << "version\t" << kVersion << '\n';
  out << "genome_chroms\t" << genome.size() << '\n';
  out << "genome_length\t" << genome.total_length() << '\n';
  out << "libraries\t" << m.libraries.size() << '\n';
  out << "merged_records\t" << r.merged_records << '\n';
  out << "aligned_records\t" << r.aligned_records << '\n';
  out << "candidate_windows\t" << window_count << '\n';
  out << "predictions\t" << r.predictions.size() << '\n';
  out << "workers\t" << m.config.workers << '\n';
  out << "elapsed_seconds\t" << fmt_seconds(r.elapsed_seconds) << '\n';
  out << "peak_rss_bytes\t" << peak_rss_bytes() << '\n';
}

void write_run_config(const RunManifest& m, std::vector<std::string>& written) {
  std::ostringstream ser;
  serialize_config(m.config, ser);
  std::ofstream out = open_output(m.out_dir, "run_config.tsv", written);
  out << "key\tvalue\n";
  std::istringstream lines(ser.str());
  std::string line;
  while (std::getline(lines, line)) {
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    out << line.substr(0, eq) << '\t' << line.substr(eq + 1) << '\n';
  }
}

void write_diff_files(const RunManifest& m, const std::vector<GuidePair>& pairs,
                      const std::vector<std::vector<DiffExprRow>>& per_pair,
                      const std::vector<ExpressionProfile>& profiles,
                      const std::vector<std::size_t>& expt_idx,
                      const std::vector<std::size_t>& ctrl_idx,
                      std::vector<std::string>& written) {
  std::ofstream fc = open_output(m.out_dir, "fold_change.tsv", written);
  fc << "pair\tmirna\trpm_experiment\trpm_control\tfold_change\n";
  std::ofstream de = open_output(m.out_dir, "diff_expression.tsv", written);
  de << "pair\tmirna\tfold_change\tz\tp\tq\tsignificant\n";
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    const std::string pair_name = pairs[pi].experiment + "->" + pairs[pi].control;
    for (std::size_t i = 0; i < per_pair[pi].size(); ++i) {
      const DiffExprRow& row = per_pair[pi][i];
      fc << pair_name << '\t' << row.mirna << '\t' << fmt_double(profiles[i].rpm[expt_idx[pi]])
         << '\t' << fmt_double(profiles[i].rpm[ctrl_idx[pi]]) << '\t'
         << fmt_double(row.fold_change) << '\n';
      de << pair_name << '\t' << row.mirna << '\t' << fmt_double(row.fold_change) << '\t'
         << fmt_double(row.z) << '\t' << fmt_double(row.p) << '\t' << fmt_double(row.q) << '\t'
         << (row.significant ? 1 : 0) << '\n';
    }
  }
}

void write_enrichment_file(const RunManifest& m, const std::vector<EnrichmentResult>& rows,
                           std::vector<std::string>& written) {
  std::ofstream out = open_output(m.out_dir, "pathway_enrichment.tsv", written);
  out << "pathway_id\tpathway_name\tsample_hits\tsample_size\tpathway_genes\tbackground_genes"
         "\tp_value\tenriched\n";
  for (const auto& e : rows) {
    out << e.pathway_id << '\t' << e.pathway_name << '\t' << e.k << '\t' << e.n << '\t' << e.K
        << '\t' << e.N << '\t' << fmt_double(e.p) << '\t' << (e.enriched ? 1 : 0) << '\n';
  }
}

}  // namespace

void validate_manifest(const RunManifest& m) {
  if (m.libraries.empty()) throw ConfigError("no input libraries");
  std::set<std::string> ids;
  for (const auto& lib : m.libraries) {
    if (lib.library_id.empty()) throw ConfigError("library with empty id");
    if (!ids.insert(lib.library_id).second)
      throw ConfigError("duplicate library id '" + lib.library_id + "'");
  }
  if (m.genome_path.empty()) throw ConfigError("no genome file");
  if (m.out_dir.empty()) throw ConfigError("no output directory");
  if (m.run_enrich && !m.run_diff) throw EnrichRequiresDiff();
  if (m.run_diff && (m.libraries.size() < 2 || m.guide_path.empty())) throw GuideRequired();
  if (m.run_enrich && m.pathway_path.empty())
    throw ConfigError("enrichment requires a pathway file");
  if (m.run_enrich && m.transcript_path.empty())
    throw ConfigError("enrichment requires a transcript fasta");
  validate_config(m.config);
}

RunResult run_pipeline(const RunManifest& m) {
  const auto t0 = std::chrono::steady_clock::now();
  validate_manifest(m);
  const PipelineConfig& cfg = m.config;

  const Genome genome = load_genome(m.genome_path);
  AnnotationIndex annotations;
  if (!m.annotation_path.empty())
    annotations = AnnotationIndex(genome, load_annotations(m.annotation_path));
  const GenomeIndex index = m.index_path.empty()
                                ? GenomeIndex::build(genome)
                                : GenomeIndex::load_or_build(genome, m.index_path);

  RunResult r;
  std::vector<std::vector<SmallRnaRecord>> per_library;
  per_library.reserve(m.libraries.size());
  for (const auto& lib : m.libraries) {
    per_library.push_back(read_library(lib));
    LibraryStats s;
    s.library_id = lib.library_id;
    s.format = library_format_name(lib.format);
    s.distinct_reads = per_library.back().size();
    for (const auto& rec : per_library.back()) s.total_reads += rec.total_count();
    r.library_stats.push_back(std::move(s));
  }
  std::vector<SmallRnaRecord> merged = merge_libraries(per_library);
  per_library.clear();
  r.merged_records = merged.size();

  Executor ex(cfg.workers);
  Dataset<SmallRnaRecord> ds = partition(std::move(merged), ex.workers());
  ds = ex.filter(ds, "filter_abundance_length",
                 [&cfg](const SmallRnaRecord& rec) { return passes_abundance_length(rec, cfg); });
  ds = ex.filter(ds, "filter_low_complexity", [&cfg](const SmallRnaRecord& rec) {
    return passes_low_complexity(rec.sequence, cfg.dust_threshold);
  });
  ds = ex.join_reference(ds, "map_align", index,
                         [](const SmallRnaRecord& rec, const GenomeIndex& idx) {
                           SmallRnaRecord out = rec;
                           out.loci = idx.locate(out.sequence);
                           return out;
                         });

  // Snapshot of every mapped record: the expression background for the
  // dominance gate and the RPM denominators.
  std::vector<SmallRnaRecord> mapped;
  r.mapped_totals.assign(m.libraries.size(), 0);
  for (const auto& part : ds.partitions) {
    for (const auto& rec : part) {
      if (rec.loci.empty()) continue;
      for (std::size_t l = 0; l < rec.counts.size(); ++l) {
        r.mapped_totals[l] += rec.counts[l];
        r.library_stats[l].mapped_reads += rec.counts[l];
      }
      mapped.push_back(rec);
    }
  }
  r.aligned_records = mapped.size();
  const AlignedReference reference(mapped);
  mapped.clear();
  mapped.shrink_to_fit();

  ds = ex.filter(ds, "filter_locus_count",
                 [&cfg](const SmallRnaRecord& rec) { return passes_locus_count(rec, cfg); });
  ds = ex.filter(ds, "filter_mirna_length",
                 [&cfg](const SmallRnaRecord& rec) { return passes_mirna_length(rec, cfg); });
  ds = ex.filter(ds, "filter_annotation", [&annotations](const SmallRnaRecord& rec) {
    return !hits_excluded_annotation(rec, annotations);
  });

  Dataset<CandidateTask> tasks =
      ex.flat_map(ds, "flat_map_windows", [&genome, &cfg](const SmallRnaRecord& rec) {
        std::vector<CandidateTask> out;
        const auto read_len = static_cast<std::uint32_t>(rec.sequence.size());
        for (const Locus& l : rec.loci) {
          for (CandidateWindow& w : extract_windows(l, read_len, genome, cfg)) {
            if (w.sequence.size() < 10) continue;  // clipped stub, cannot fold
            out.push_back({rec, std::move(w)});
          }
        }
        return out;
      });
  const std::size_t window_count = tasks.total_count();

  Dataset<EvaluatedCandidate> evaluated =
      ex.map(tasks, "map_evaluate", [&reference, &cfg](const CandidateTask& task) {
        return EvaluatedCandidate{
            task.record,
            evaluate_candidate(task.window, task.record.total_count(), reference, cfg)};
      });

  // Group rows per mature (they are contiguous: records stayed in merge
  // order), pick the best verdict per locus, then keep passing precursors
  // with distinct genomic spans.
  const std::vector<EvaluatedCandidate> rows = evaluated.collect();
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].record.sequence == rows[i].record.sequence) ++j;

    std::map<Locus, std::size_t> best;  // locus -> row index with deepest verdict
    for (std::size_t k = i; k < j; ++k) {
      r.candidates.push_back({rows[k].record.sequence, rows[k].candidate});
      const Locus l = locus_of_window(rows[k].candidate.window);
      auto [it, inserted] = best.emplace(l, k);
      if (!inserted &&
          verdict_depth(rows[k].candidate.verdict) > verdict_depth(rows[it->second].candidate.verdict))
        it->second = k;
    }

    std::set<SpanKey> seen;
    std::vector<PrecursorCandidate> passing;
    for (const auto& [locus, k] : best) {
      (void)locus;
      const PrecursorCandidate& c = rows[k].candidate;
      if (c.verdict != Verdict::Pass) continue;
      if (!seen.insert(span_key(c)).second) continue;
      passing.push_back(c);
    }
    if (!passing.empty()) {
      MirnaPrediction p;
      p.mature = rows[i].record.sequence;
      p.counts = rows[i].record.counts;
      p.total = rows[i].record.total_count();
      p.loci = rows[i].record.loci;
      p.precursors = std::move(passing);
      r.predictions.push_back(std::move(p));
    }
    i = j;
  }

  std::filesystem::create_directories(m.out_dir);
  write_predictions_file(m, r, r.written_files);
  write_loci_file(m, r, genome, r.written_files);
  write_precursors_file(m, r, genome, r.written_files);
  write_star_file(m, r, genome, r.written_files);
  write_expression_files(m, r, r.written_files);
  write_library_summary(m, r, r.written_files);

  if (m.run_diff) {
    std::vector<std::string> ids;
    ids.reserve(m.libraries.size());
    for (const auto& lib : m.libraries) ids.push_back(lib.library_id);
    const std::vector<GuidePair> pairs = parse_guide_file(m.guide_path, ids);

    std::vector<ExpressionProfile> profiles;
    profiles.reserve(r.predictions.size());
    for (const auto& p : r.predictions) {
      ExpressionProfile prof;
      prof.mirna = p.mature;
      prof.counts = p.counts;
      prof.rpm.resize(p.counts.size());
      for (std::size_t l = 0; l < p.counts.size(); ++l) {
        const double denom = static_cast<double>(r.mapped_totals[l]);
        prof.rpm[l] = denom > 0.0 ? static_cast<double>(p.counts[l]) * 1e6 / denom : 0.0;
      }
      profiles.push_back(std::move(prof));
    }

    std::vector<std::vector<DiffExprRow>> per_pair;
    std::vector<std::size_t> expt_idx, ctrl_idx;
    for (const auto& pair : pairs) {
      const auto index_of = [&ids](const std::string& id) {
        return static_cast<std::size_t>(
            std::find(ids.begin(), ids.end(), id) - ids.begin());
      };
      expt_idx.push_back(index_of(pair.experiment));
      ctrl_idx.push_back(index_of(pair.control));
      per_pair.push_back(differential_expression(profiles, r.mapped_totals, expt_idx.back(),
                                                 ctrl_idx.back(), cfg));
    }
    write_diff_files(m, pairs, per_pair, profiles, expt_idx, ctrl_idx, r.written_files);

    if (m.run_enrich) {
      std::set<std::string> significant;
      for (const auto& rows_of_pair : per_pair) {
        for (const auto& row : rows_of_pair) {
          if (row.significant) significant.insert(row.mirna);
        }
      }
      const Genome transcripts = load_genome(m.transcript_path);
      const PathwayMap pathways = load_pathways(m.pathway_path);
      std::set<std::string> sample;
      for (const std::string& mirna : significant) {
        for (const TargetHit& hit : target_rank(mirna, transcripts)) sample.insert(hit.gene_id);
      }
      const std::vector<EnrichmentResult> enrichment = hypergeom_enrich(
          std::vector<std::string>(sample.begin(), sample.end()), pathways, cfg.alpha);
      write_enrichment_file(m, enrichment, r.written_files);
    }
  }

  r.stage_metrics = ex.metrics();
  {
    std::ofstream out = open_output(m.out_dir, "stage_metrics.tsv", r.written_files);
    write_stage_metrics(out, r.stage_metrics);
  }
  write_run_config(m, r.written_files);
  r.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_run_summary(m, r, genome, window_count, r.written_files);
  return r;
}

std::vector<TruthEntry> load_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<TruthEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.rfind("sequence\t", 0) == 0) continue;
    std::istringstream ss(line);
    std::string seq, label;
    if (!std::getline(ss, seq, '\t') || !std::getline(ss, label, '\t'))
      throw ParseError(line_no, "expected sequence<TAB>label");
    if (label != "positive" && label != "negative")
      throw ParseError(line_no, "label must be positive or negative");
    out.push_back({seq, label == "positive"});
  }
  return out;
}

void write_truth(const std::string& path, const std::vector<TruthEntry>& entries,
                 const std::vector<std::string>& loci) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "sequence\tlabel\tlocus\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    out << entries[i].sequence << '\t' << (entries[i].positive ? "positive" : "negative") << '\t'
        << (i < loci.size() ? loci[i] : std::string(".")) << '\n';
  }
}

std::vector<std::string> load_prediction_sequences(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<std::string> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("mirna", 0) == 0) continue;
    }
    out.push_back(line.substr(0, line.find('\t')));
  }
  return out;
}

ConfusionCounts confusion_against_truth(const std::vector<std::string>& predicted,
                                        const std::vector<TruthEntry>& truth) {
  const std::set<std::string> pred(predicted.begin(), predicted.end());
  std::set<std::string> positives, negatives;
  for (const auto& t : truth) (t.positive ? positives : negatives).insert(t.sequence);
  ConfusionCounts c;
  for (const auto& s : positives) {
    if (pred.count(s) != 0) ++c.tp;
    else ++c.fn;
  }
  for (const auto& s : negatives) {
    if (pred.count(s) != 0) ++c.fp;
    else ++c.tn;
  }
  // Predictions outside the truth set still count against precision.
  for (const auto& s : pred) {
    if (positives.count(s) == 0 && negatives.count(s) == 0) ++c.fp;
  }
  return c;
}

void write_evaluation(const std::string& path, const ConfusionCounts& counts,
                      const ClassificationMetrics& metrics) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "metric\tvalue\n";
  out << "tp\t" << counts.tp << '\n';
  out << "fp\t" << counts.fp << '\n';
  out << "tn\t" << counts.tn << '\n';
  out << "fn\t" << counts.fn << '\n';
  out << "precision\t" << fmt_double(metrics.precision) << '\n';
  out << "sensitivity\t" << fmt_double(metrics.sensitivity) << '\n';
  out << "accuracy\t" << fmt_double(metrics.accuracy) << '\n';
  out << "f1\t" << fmt_double(metrics.f1) << '\n';
  out << "mcc\t" << fmt_double(metrics.mcc) << '\n';
}

}  // namespace mirflow
