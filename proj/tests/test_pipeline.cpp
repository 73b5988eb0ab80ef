// End-to-end runs over small synthetic fixtures written into temp dirs.
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "mirflow/errors.hpp"
#include "mirflow/pipeline.hpp"
#include "mirflow/simulate.hpp"
#include "support/tmpdir.hpp"

using namespace mirflow;
namespace fs = std::filesystem;

namespace {

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> kBaseFiles = {
    "mirna_predictions.tsv", "mirna_loci.tsv",      "precursors.tsv",
    "mirna_star.tsv",        "expression_counts.tsv", "expression_rpm.tsv",
    "library_summary.tsv",   "stage_metrics.tsv",   "run_config.tsv",
    "run_summary.tsv"};

// files whose bytes may depend on worker count or wall time
bool run_specific(const std::string& name) {
  return name == "run_summary.tsv" || name == "stage_metrics.tsv" || name == "run_config.tsv";
}

struct Fixture {
  testsupport::TmpDir dir{"pipeline"};
  PlantedGenome sim;
  std::string genome_path;
  std::string lib_a;

  Fixture() {
    PlantedGenomeParams p;
    p.n_hairpins = 3;
    p.genome_len = 30000;
    p.seed = 5;
    sim = simulate_planted_genome(p);

    genome_path = dir.file("genome.fa");
    write_text(genome_path, ">sim1\n" + sim.genome.seqs[0] + "\n");

    std::ostringstream lib;
    for (const auto& [seq, count] : sim.reads) lib << seq << '\t' << count << '\n';
    lib_a = dir.file("libA.tsv");
    write_text(lib_a, lib.str());
  }

  RunManifest manifest(const std::string& run_name) const {
    RunManifest m;
    m.libraries = {{"libA", LibraryFormat::TsvReadcount, lib_a}};
    m.genome_path = genome_path;
    m.out_dir = dir.file(run_name);
    m.config.workers = 1;
    return m;
  }
};

}  // namespace

TEST_CASE("manifest validation rejects unrunnable setups") {
  RunManifest base;
  base.libraries = {{"a", LibraryFormat::Reads, "a.txt"}, {"b", LibraryFormat::Reads, "b.txt"}};
  base.genome_path = "g.fa";
  base.out_dir = "out";
  CHECK_NOTHROW(validate_manifest(base));

  RunManifest m = base;
  m.libraries.clear();
  CHECK_THROWS_AS(validate_manifest(m), ConfigError);

  m = base;
  m.libraries[1].library_id = "";
  CHECK_THROWS_AS(validate_manifest(m), ConfigError);

  m = base;
  m.libraries[1].library_id = "a";
  CHECK_THROWS_AS(validate_manifest(m), ConfigError);

  m = base;
  m.genome_path.clear();
  CHECK_THROWS_AS(validate_manifest(m), ConfigError);

  m = base;
  m.out_dir.clear();
  CHECK_THROWS_AS(validate_manifest(m), ConfigError);

  m = base;
  m.run_enrich = true;  // enrichment presupposes differential analysis
  CHECK_THROWS_AS(validate_manifest(m), EnrichRequiresDiff);

  m = base;
  m.run_diff = true;
  CHECK_THROWS_AS(validate_manifest(m), GuideRequired);  // no guide file

  m = base;
  m.run_diff = true;
  m.guide_path = "guide.txt";
  m.libraries.pop_back();
  CHECK_THROWS_AS(validate_manifest(m), GuideRequired);  // single library

  m = base;
  m.run_diff = true;
  m.run_enrich = true;
  m.guide_path = "guide.txt";
  m.transcript_path = "t.fa";
  CHECK_THROWS_AS(validate_manifest(m), ConfigError);  // no pathways

  m = base;
  m.run_diff = true;
  m.run_enrich = true;
  m.guide_path = "guide.txt";
  m.pathway_path = "p.tsv";
  CHECK_THROWS_AS(validate_manifest(m), ConfigError);  // no transcripts

  m = base;
  m.config.workers = 0;
  CHECK_THROWS_AS(validate_manifest(m), ConfigError);
}

TEST_CASE("prediction run writes the ten-file set and recovers planted matures") {
  Fixture fx;
  RunManifest m = fx.manifest("run1");
  RunResult r = run_pipeline(m);

  REQUIRE_EQ(r.written_files.size(), 10);
  std::set<std::string> written(r.written_files.begin(), r.written_files.end());
  for (const auto& name : kBaseFiles) {
    CHECK_EQ(written.count(name), 1);
    CHECK(fs::exists(fs::path(m.out_dir) / name));
  }

  REQUIRE_EQ(r.predictions.size(), 3);
  std::set<std::string> truth_matures;
  for (const auto& t : fx.sim.truth) truth_matures.insert(t.mature);
  for (const auto& p : r.predictions) {
    CHECK_EQ(truth_matures.count(p.mature), 1);
    CHECK_EQ(p.total, 200);
    REQUIRE_EQ(p.counts.size(), 1);
    CHECK_EQ(p.counts[0], 200);
    CHECK_EQ(p.loci.size(), 1);
    CHECK_GE(p.precursors.size(), 1);
  }

  REQUIRE_EQ(r.library_stats.size(), 1);
  CHECK_EQ(r.library_stats[0].library_id, "libA");
  CHECK_EQ(r.library_stats[0].total_reads, 600);
  CHECK_EQ(r.library_stats[0].distinct_reads, 3);
  CHECK_EQ(r.library_stats[0].mapped_reads, 600);
  CHECK_EQ(r.merged_records, 3);
  CHECK_EQ(r.aligned_records, 3);
  REQUIRE_EQ(r.mapped_totals.size(), 1);
  CHECK_EQ(r.mapped_totals[0], 600);

  auto listed = load_prediction_sequences((fs::path(m.out_dir) / "mirna_predictions.tsv").string());
  CHECK_EQ(std::set<std::string>(listed.begin(), listed.end()), truth_matures);
}

TEST_CASE("result tables are byte-identical across worker counts and reruns") {
  Fixture fx;

  RunManifest m1 = fx.manifest("w1");
  run_pipeline(m1);
  RunManifest m3 = fx.manifest("w3");
  m3.config.workers = 3;
  run_pipeline(m3);
  RunManifest m1b = fx.manifest("w1b");
  run_pipeline(m1b);

  for (const auto& name : kBaseFiles) {
    const std::string a = read_bytes((fs::path(m1.out_dir) / name).string());
    if (!run_specific(name)) {
      CHECK_MESSAGE(a == read_bytes((fs::path(m3.out_dir) / name).string()), name);
    }
    if (name != "run_summary.tsv" && name != "stage_metrics.tsv") {
      // a rerun with the identical manifest reproduces even the config echo
      CHECK_MESSAGE(a == read_bytes((fs::path(m1b.out_dir) / name).string()), name);
    }
  }

  // the config echo differs across worker counts only in the workers row
  std::istringstream c1(read_bytes((fs::path(m1.out_dir) / "run_config.tsv").string()));
  std::istringstream c3(read_bytes((fs::path(m3.out_dir) / "run_config.tsv").string()));
  std::string l1, l3;
  while (std::getline(c1, l1)) {
    REQUIRE(static_cast<bool>(std::getline(c3, l3)));
    if (l1.rfind("workers\t", 0) == 0) {
      CHECK_EQ(l1, "workers\t1");
      CHECK_EQ(l3, "workers\t3");
    } else {
      CHECK_EQ(l1, l3);
    }
  }
  CHECK_FALSE(static_cast<bool>(std::getline(c3, l3)));
}

TEST_CASE("suffix array cache file is created and reused") {
  Fixture fx;
  RunManifest m = fx.manifest("cached1");
  m.index_path = fx.dir.file("genome.sai");
  RunResult first = run_pipeline(m);
  CHECK(fs::exists(m.index_path));

  RunManifest again = fx.manifest("cached2");
  again.index_path = m.index_path;
  RunResult second = run_pipeline(again);
  REQUIRE_EQ(second.predictions.size(), first.predictions.size());
  for (std::size_t i = 0; i < first.predictions.size(); ++i)
    CHECK_EQ(second.predictions[i].mature, first.predictions[i].mature);
}

TEST_CASE("differential expression and enrichment extend the output set") {
  Fixture fx;

  // second library with the first mature strongly upregulated
  std::ostringstream lib_b;
  for (std::size_t i = 0; i < fx.sim.reads.size(); ++i)
    lib_b << fx.sim.reads[i].first << '\t' << (i == 0 ? 4000 : 200) << '\n';
  const std::string lib_b_path = fx.dir.file("libB.tsv");
  write_text(lib_b_path, lib_b.str());

  const std::string guide_path = fx.dir.file("guide.txt");
  write_text(guide_path, "Experiment->Control\nlibB->libA\n");

  RunManifest m = fx.manifest("diff");
  m.libraries.push_back({"libB", LibraryFormat::TsvReadcount, lib_b_path});
  m.guide_path = guide_path;
  m.run_diff = true;
  RunResult r = run_pipeline(m);
  CHECK_EQ(r.written_files.size(), 12);
  CHECK(fs::exists(fs::path(m.out_dir) / "fold_change.tsv"));
  CHECK(fs::exists(fs::path(m.out_dir) / "diff_expression.tsv"));

  // one diff row per prediction, all tagged with the guide pair
  std::istringstream de(read_bytes((fs::path(m.out_dir) / "diff_expression.tsv").string()));
  std::string line;
  REQUIRE(static_cast<bool>(std::getline(de, line)));
  CHECK_EQ(line, "pair\tmirna\tfold_change\tz\tp\tq\tsignificant");
  std::size_t rows = 0;
  while (std::getline(de, line)) {
    ++rows;
    CHECK_EQ(line.rfind("libB->libA\t", 0), 0);
  }
  CHECK_EQ(rows, r.predictions.size());

  // enrichment needs pathways and transcripts on top of the diff run
  const std::string mature0 = fx.sim.truth[0].mature;
  const std::string transcripts_path = fx.dir.file("transcripts.fa");
  write_text(transcripts_path, ">g1.1\nACGGT" + reverse_complement(mature0) +
                                   "TGCAA\n>g2.1\nGTGTGACCAGATTGCGCATACCGGTTAACGGAT\n");
  const std::string pathways_path = fx.dir.file("pathways.tsv");
  write_text(pathways_path, "g1\tP1:Alpha\ng2\tP2:Beta\n");

  RunManifest e = fx.manifest("enrich");
  e.libraries = m.libraries;
  e.guide_path = guide_path;
  e.run_diff = true;
  e.run_enrich = true;
  e.transcript_path = transcripts_path;
  e.pathway_path = pathways_path;
  RunResult er = run_pipeline(e);
  CHECK_EQ(er.written_files.size(), 13);
  const std::string enr = read_bytes((fs::path(e.out_dir) / "pathway_enrichment.tsv").string());
  CHECK_EQ(enr.rfind("pathway_id\tpathway_name\t", 0), 0);

  // enrichment without the differential stage is rejected up front
  RunManifest bad = e;
  bad.run_diff = false;
  bad.guide_path.clear();
  bad.out_dir = fx.dir.file("bad");
  CHECK_THROWS_AS(run_pipeline(bad), EnrichRequiresDiff);
  CHECK_FALSE(fs::exists(bad.out_dir));
}

TEST_CASE("truth files round-trip and score against a prediction list") {
  testsupport::TmpDir dir("truth");
  const std::string path = dir.file("truth.tsv");
  std::vector<TruthEntry> entries = {{"AAACCC", true}, {"GGGTTT", false}, {"TTTAAA", true}};
  write_truth(path, entries, {"c1:10:+", "", "c2:99:-"});

  auto loaded = load_truth(path);
  REQUIRE_EQ(loaded.size(), 3);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CHECK_EQ(loaded[i].sequence, entries[i].sequence);
    CHECK_EQ(loaded[i].positive, entries[i].positive);
  }

  // malformed label
  write_text(dir.file("bad.tsv"), "sequence\tlabel\tlocus\nAAA\tmaybe\t.\n");
  CHECK_THROWS_AS(load_truth(dir.file("bad.tsv")), ParseError);
  CHECK_THROWS_AS(load_truth(dir.file("missing.tsv")), IoError);

  // unknown predictions count against precision
  std::vector<TruthEntry> truth = {
      {"AAACCC", true}, {"TTTAAA", true}, {"GGGTTT", false}, {"CCCGGG", false}};
  ConfusionCounts c = confusion_against_truth({"AAACCC", "GGGTTT", "ACGTACGT"}, truth);
  CHECK_EQ(c.tp, 1);
  CHECK_EQ(c.fn, 1);
  CHECK_EQ(c.fp, 2);
  CHECK_EQ(c.tn, 1);

  const std::string eval_path = dir.file("evaluation.tsv");
  write_evaluation(eval_path, c, confusion_metrics(c));
  const std::string text = read_bytes(eval_path);
  CHECK_NE(text.find("metric\tvalue\n"), std::string::npos);
  CHECK_NE(text.find("tp\t1\n"), std::string::npos);
  CHECK_NE(text.find("fp\t2\n"), std::string::npos);
  CHECK_NE(text.find("tn\t1\n"), std::string::npos);
  CHECK_NE(text.find("fn\t1\n"), std::string::npos);
  CHECK_NE(text.find("precision\t"), std::string::npos);
  CHECK_NE(text.find("mcc\t"), std::string::npos);
}
