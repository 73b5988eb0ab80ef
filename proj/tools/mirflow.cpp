// mirflow command line: predict | pipeline | simulate | evaluate | cluster |
// index. Every failure path prints one "error: Code: detail" line and exits
// nonzero.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mirflow/cluster.hpp"
#include "mirflow/config.hpp"
#include "mirflow/errors.hpp"
#include "mirflow/genome_index.hpp"
#include "mirflow/io.hpp"
#include "mirflow/pipeline.hpp"
#include "mirflow/simulate.hpp"
#include "mirflow/version.hpp"

namespace {

using namespace mirflow;

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

struct RunOptions {
  std::vector<std::string> library_paths;
  std::string format = "reads";
  std::string config_path;
  std::string genome_path;
  std::string annotation_path;
  std::string index_path;
  std::string guide_path;
  std::string pathway_path;
  std::string transcript_path;
  std::string out_dir;
  unsigned workers = 0;  // 0: keep the config value
  bool diff = false;
  bool enrich = false;
};

void add_run_options(CLI::App* cmd, RunOptions& opt, bool full_pipeline) {
  cmd->add_option("libraries", opt.library_paths, "small-RNA library files")
      ->required()
      ->expected(-1);
  cmd->add_option("--format", opt.format, "library format: tsv|reads|fasta|fastq")
      ->capture_default_str();
  cmd->add_option("--config", opt.config_path, "key=value config file");
  cmd->add_option("--genome", opt.genome_path, "genome fasta")->required();
  cmd->add_option("--annotations", opt.annotation_path, "excluded-feature TSV");
  cmd->add_option("--index", opt.index_path, "suffix-array cache file (built when missing)");
  cmd->add_option("--out-dir", opt.out_dir, "output directory")->required();
  cmd->add_option("--workers", opt.workers, "worker count (overrides config)");
  if (full_pipeline) {
    cmd->add_option("--guide", opt.guide_path, "comparison pairs file");
    cmd->add_flag("--diff", opt.diff, "run differential expression");
    cmd->add_flag("--enrich", opt.enrich, "run pathway enrichment (implies targets)");
    cmd->add_option("--pathways", opt.pathway_path, "gene-to-pathway TSV");
    cmd->add_option("--transcripts", opt.transcript_path, "transcript fasta for target ranking");
  }
}

RunManifest manifest_from(const RunOptions& opt) {
  RunManifest m;
  const LibraryFormat fmt = parse_library_format(opt.format);
  for (const auto& path : opt.library_paths) m.libraries.push_back({stem_of(path), fmt, path});
  m.genome_path = opt.genome_path;
  m.annotation_path = opt.annotation_path;
  m.index_path = opt.index_path;
  m.guide_path = opt.guide_path;
  m.pathway_path = opt.pathway_path;
  m.transcript_path = opt.transcript_path;
  m.out_dir = opt.out_dir;
  m.run_diff = opt.diff;
  m.run_enrich = opt.enrich;
  if (!opt.config_path.empty()) m.config = load_config(opt.config_path);
  if (opt.workers != 0) m.config.workers = opt.workers;
  return m;
}

int run_prediction(const RunOptions& opt) {
  const RunManifest m = manifest_from(opt);
  const RunResult r = run_pipeline(m);
  std::cout << "libraries: " << m.libraries.size() << ", merged records: " << r.merged_records
            << ", aligned: " << r.aligned_records << '\n';
  std::cout << "predictions: " << r.predictions.size() << '\n';
  std::cout << "outputs: " << m.out_dir << " (" << r.written_files.size() << " files)\n";
  return 0;
}

void write_fasta(const std::string& path, const Genome& genome) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (std::size_t i = 0; i < genome.size(); ++i) {
    out << '>' << genome.names[i] << '\n';
    const std::string& s = genome.seqs[i];
    for (std::size_t p = 0; p < s.size(); p += 70) out << s.substr(p, 70) << '\n';
  }
}

struct SimulateOptions {
  std::string out_dir;
  std::string annotation_path;
  std::uint64_t seed = 1;
  unsigned hairpins = 20;
  unsigned stem_len = 30;
  std::uint64_t genome_len = 200000;
  std::uint64_t mature_count = 200;
  std::uint64_t negatives = 0;  // 0: ten decoys per planted hairpin
  std::uint64_t neg_count_min = 10;
  std::uint64_t neg_count_max = 50;
};

int run_simulate(const SimulateOptions& opt) {
  if (opt.neg_count_min == 0 || opt.neg_count_min > opt.neg_count_max)
    throw ConfigError("negative count range must satisfy 1 <= min <= max");

  PlantedGenomeParams params;
  params.n_hairpins = opt.hairpins;
  params.stem_len = opt.stem_len;
  params.genome_len = opt.genome_len;
  params.mature_count = opt.mature_count;
  params.seed = opt.seed;
  const PlantedGenome sim = simulate_planted_genome(params);

  AnnotationIndex excluded;
  if (!opt.annotation_path.empty())
    excluded = AnnotationIndex(sim.genome, load_annotations(opt.annotation_path));
  std::vector<std::string> known;
  for (const auto& t : sim.truth) known.push_back(t.mature);
  NegativeSetParams nparams;
  nparams.count = opt.negatives != 0 ? opt.negatives : 10ull * opt.hairpins;
  nparams.seed = opt.seed;
  const std::vector<std::string> negatives =
      simulate_negative_set(sim.genome, excluded, known, nparams);

  // Decoy abundances come from a second stream so changing the negative
  // count never reshuffles the genome.
  std::mt19937_64 count_rng(opt.seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<std::uint64_t> count_dist(opt.neg_count_min, opt.neg_count_max);

  std::filesystem::create_directories(opt.out_dir);
  const std::filesystem::path dir(opt.out_dir);
  write_fasta((dir / "genome.fa").string(), sim.genome);

  std::ofstream lib(dir / "library.tsv");
  if (!lib) throw IoError("cannot write " + (dir / "library.tsv").string());
  std::vector<TruthEntry> truth;
  std::vector<std::string> loci;
  for (const auto& t : sim.truth) {
    lib << t.mature << '\t' << params.mature_count << '\n';
    truth.push_back({t.mature, true});
    loci.push_back(t.chrom + ":" + std::to_string(t.hairpin_start) + "-" +
                   std::to_string(t.hairpin_end));
  }
  for (const auto& seq : negatives) {
    lib << seq << '\t' << count_dist(count_rng) << '\n';
    truth.push_back({seq, false});
    loci.push_back(".");
  }
  lib.close();
  write_truth((dir / "truth.tsv").string(), truth, loci);

  std::cout << "simulated: " << sim.truth.size() << " hairpins, " << negatives.size()
            << " decoys -> " << opt.out_dir << '\n';
  return 0;
}

int run_evaluate(const std::string& predictions_path, const std::string& truth_path,
                 const std::string& out_path) {
  const std::vector<std::string> predicted = load_prediction_sequences(predictions_path);
  const std::vector<TruthEntry> truth = load_truth(truth_path);
  const ConfusionCounts counts = confusion_against_truth(predicted, truth);
  const ClassificationMetrics metrics = confusion_metrics(counts);
  write_evaluation(out_path, counts, metrics);
  std::cout << "tp=" << counts.tp << " fp=" << counts.fp << " tn=" << counts.tn
            << " fn=" << counts.fn << " precision=" << metrics.precision
            << " sensitivity=" << metrics.sensitivity << " f1=" << metrics.f1
            << " mcc=" << metrics.mcc << '\n';
  return 0;
}

int run_cluster(const std::string& predictions_path, const std::string& out_path,
                double threshold, unsigned workers) {
  const std::vector<std::string> seqs = load_prediction_sequences(predictions_path);
  std::vector<SequenceCluster> clusters;
  if (workers > 1) {
    Executor ex(workers);
    clusters = single_linkage_cluster(seqs, threshold, {}, ex);
  } else {
    clusters = single_linkage_cluster(seqs, threshold);
  }
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write " + out_path);
  out << "member\tcluster_id\n";
  for (const auto& c : clusters) {
    for (const auto& member : c.members) out << member << '\t' << c.id << '\n';
  }
  std::size_t n = 0;
  for (const auto& c : clusters) n += c.members.size();
  std::cout << "clusters: " << clusters.size() << " (" << n << " sequences)\n";
  return 0;
}

int run_index(const std::string& genome_path, const std::string& out_path) {
  const Genome genome = load_genome(genome_path);
  const GenomeIndex index = GenomeIndex::build(genome);
  index.save(out_path);
  std::cout << "index: " << index.text_size() << " positions -> " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plant small-RNA sequencing miRNA prediction pipeline"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunOptions predict_opt;
  CLI::App* predict = app.add_subcommand("predict", "predict miRNAs from libraries");
  add_run_options(predict, predict_opt, false);

  RunOptions pipeline_opt;
  CLI::App* pipeline =
      app.add_subcommand("pipeline", "full run: prediction plus optional statistics layers");
  add_run_options(pipeline, pipeline_opt, true);

  SimulateOptions sim_opt;
  CLI::App* simulate = app.add_subcommand("simulate", "build a planted-hairpin benchmark");
  simulate->add_option("--out-dir", sim_opt.out_dir, "output directory")->required();
  simulate->add_option("--seed", sim_opt.seed, "RNG seed")->capture_default_str();
  simulate->add_option("--hairpins", sim_opt.hairpins, "planted hairpin count")
      ->capture_default_str();
  simulate->add_option("--stem-len", sim_opt.stem_len, "hairpin stem length (>= 25)")
      ->capture_default_str();
  simulate->add_option("--genome-len", sim_opt.genome_len, "genome length")
      ->capture_default_str();
  simulate->add_option("--mature-count", sim_opt.mature_count, "read count per mature")
      ->capture_default_str();
  simulate->add_option("--negatives", sim_opt.negatives,
                       "decoy read count (default: 10 per hairpin)");
  simulate->add_option("--neg-count-min", sim_opt.neg_count_min, "decoy abundance lower bound")
      ->capture_default_str();
  simulate->add_option("--neg-count-max", sim_opt.neg_count_max, "decoy abundance upper bound")
      ->capture_default_str();
  simulate->add_option("--annotations", sim_opt.annotation_path,
                       "excluded features decoys must avoid");

  std::string eval_predictions, eval_truth, eval_out = "evaluation.tsv";
  CLI::App* evaluate = app.add_subcommand("evaluate", "score predictions against a truth set");
  evaluate->add_option("--predictions", eval_predictions, "mirna_predictions.tsv")->required();
  evaluate->add_option("--truth", eval_truth, "truth.tsv from simulate")->required();
  evaluate->add_option("--out", eval_out, "metrics output file")->capture_default_str();

  std::string cluster_predictions, cluster_out = "clusters.tsv", cluster_config;
  double cluster_threshold = 0.0;
  unsigned cluster_workers = 1;
  CLI::App* cluster = app.add_subcommand("cluster", "group predicted matures into families");
  cluster->add_option("--predictions", cluster_predictions, "mirna_predictions.tsv")->required();
  cluster->add_option("--out", cluster_out, "cluster output file")->capture_default_str();
  cluster->add_option("--threshold", cluster_threshold,
                      "bitscore link threshold (default from config)");
  cluster->add_option("--config", cluster_config, "key=value config file");
  cluster->add_option("--workers", cluster_workers, "worker count")->capture_default_str();

  std::string index_genome, index_out;
  CLI::App* index = app.add_subcommand("index", "build and save the genome suffix array");
  index->add_option("--genome", index_genome, "genome fasta")->required();
  index->add_option("--out", index_out, "index file to write")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(predict)) return run_prediction(predict_opt);
    if (app.got_subcommand(pipeline)) return run_prediction(pipeline_opt);
    if (app.got_subcommand(simulate)) return run_simulate(sim_opt);
    if (app.got_subcommand(evaluate)) return run_evaluate(eval_predictions, eval_truth, eval_out);
    if (app.got_subcommand(cluster)) {
      PipelineConfig cfg;
      if (!cluster_config.empty()) cfg = load_config(cluster_config);
      const double threshold =
          cluster->count("--threshold") != 0 ? cluster_threshold : cfg.bitscore_threshold;
      return run_cluster(cluster_predictions, cluster_out, threshold, cluster_workers);
    }
    if (app.got_subcommand(index)) return run_index(index_genome, index_out);
  } catch (const PipelineError& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
