#include <gtest/gtest.h>

#include <filesystem>
#include <set>
#include <string>

#include "clonescope/artifacts.hpp"
#include "clonescope/synth.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace clonescope;
using testing_support::TempDir;

namespace {

testing_support::Shell cli(const std::string& args) {
    return testing_support::run(std::string(CLONESCOPE_CLI) + " " + args + " 2>&1");
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

const std::string kSmallEmbed = " --dim 8 --epochs 2 --rae-epochs 2";

void make_corpus(const fs::path& root, std::size_t methods = 120) {
    synth::Config cfg;
    cfg.projects = 3;
    cfg.methods = methods;
    cfg.seed = 21;
    synth::write_corpus(synth::generate(cfg), root);
}

void run_pipeline(const fs::path& corpus, const fs::path& out) {
    ASSERT_EQ(cli("extract --corpus " + q(corpus) + " --out " + q(out)).status, 0);
    ASSERT_EQ(cli("detect --out " + q(out)).status, 0);
    const auto e = cli("embed --out " + q(out) + kSmallEmbed);
    ASSERT_EQ(e.status, 0) << e.out;
    ASSERT_EQ(cli("filter --out " + q(out) + " --sample 20").status, 0);
}

}  // namespace

TEST(Cli, HelpAndUnknownCommand) {
    const auto help = cli("--help");
    EXPECT_EQ(help.status, 0);
    for (const char* sub : {"extract", "detect", "embed", "filter", "serve", "evaluate", "report", "bench"}) {
        EXPECT_NE(help.out.find(sub), std::string::npos) << sub;
    }
    EXPECT_NE(cli("frobnicate").status, 0);
    EXPECT_NE(cli("").status, 0);
}

TEST(Cli, EndToEnd) {
    TempDir dir;
    make_corpus(dir / "corpus");
    const auto out = dir / "out";
    run_pipeline(dir / "corpus", out);

    for (const char* f : {"methods.jsonl", "bags.jsonl", "repr-identifier.jsonl", "repr-ast.jsonl", "manifest.json",
                          "pairs-overlap.jsonl", "summary-overlap.json", "pairs-identifier.jsonl", "pairs-ast.jsonl",
                          "pairs-combination.jsonl", "candidates.jsonl", "sample.jsonl"}) {
        EXPECT_TRUE(fs::exists(out / f)) << f;
    }
    const auto methods = read_jsonl(out / "methods.jsonl");
    const auto bags = read_jsonl(out / "bags.jsonl");
    EXPECT_EQ(methods.size(), bags.size());
    EXPECT_GT(methods.size(), 100U);

    // Combination is the union of the two embedding detectors.
    std::set<std::string> ident;
    std::set<std::string> ast;
    std::set<std::string> comb;
    for (const auto& p : load_jsonl(out / "pairs-identifier.jsonl", pair_from_json)) ident.insert(p.key());
    for (const auto& p : load_jsonl(out / "pairs-ast.jsonl", pair_from_json)) ast.insert(p.key());
    for (const auto& p : load_jsonl(out / "pairs-combination.jsonl", pair_from_json)) comb.insert(p.key());
    std::set<std::string> uni = ident;
    uni.insert(ast.begin(), ast.end());
    EXPECT_EQ(comb, uni);

    // Hand-built truth: every candidate is a clone iff its filter score is at least 0.9.
    std::vector<GroundTruth> truth;
    std::uint64_t positives = 0;
    for (const auto& c : load_jsonl(out / "candidates.jsonl", candidate_from_json)) {
        const bool clone = c.filter_score >= 0.9;
        positives += clone ? 1 : 0;
        truth.push_back({c.key(), clone ? Label::Type3 : Label::NotClone, 2});
    }
    ASSERT_FALSE(truth.empty());
    write_jsonl(out / "truth.jsonl", truth);
    const auto ev = cli("evaluate --out " + q(out));
    ASSERT_EQ(ev.status, 0) << ev.out;
    const auto overlap = confusion_from_json(read_json(out / "confusion-overlap.json"));
    EXPECT_EQ(overlap.tp, positives);
    EXPECT_EQ(overlap.fp, 0U);
    EXPECT_EQ(overlap.fn, 0U);
    EXPECT_TRUE(fs::exists(out / "metrics.json"));
    EXPECT_TRUE(fs::exists(out / "type-distribution.json"));

    ASSERT_EQ(cli("report --out " + q(out)).status, 0);
    const auto report = testing_support::read_file(out / "report.md");
    EXPECT_NE(report.find("Confusion matrices"), std::string::npos);
    EXPECT_NE(report.find("Clone type distribution"), std::string::npos);
}

TEST(Cli, EvaluateGivenConfusionMatrices) {
    TempDir dir;
    testing_support::write_file(dir / "m.json",
                                R"({"Overlap": {"tp": 247, "fp": 1, "fn": 616, "tn": 136},
                                    "Combination": {"tp": 30, "fp": 16, "fn": 33, "tn": 122}})");
    const auto r = cli("evaluate --out " + q(dir / "out") + " --confusion " + q(dir / "m.json"));
    ASSERT_EQ(r.status, 0) << r.out;
    const auto metrics = read_json(dir / "out/metrics.json");
    EXPECT_EQ(metrics["overlap"]["precision_pct"], 99.6);
    EXPECT_EQ(metrics["overlap"]["recall_pct"], 28.6);
    EXPECT_EQ(metrics["combination"]["precision_pct"], 65.2);
    EXPECT_EQ(metrics["combination"]["recall_pct"], 47.6);
}

TEST(Cli, MissingArtifactFailsCleanly) {
    TempDir dir;
    for (const char* sub : {"detect", "embed", "filter", "evaluate", "report"}) {
        const auto r = cli(std::string(sub) + " --out " + q(dir / "empty"));
        EXPECT_EQ(r.status, 1) << sub;
        EXPECT_NE(r.out.find("clonescope: error:"), std::string::npos) << sub << ": " << r.out;
    }
    const auto r = cli("extract --corpus " + q(dir / "absent") + " --out " + q(dir / "o"));
    EXPECT_EQ(r.status, 1);
}

TEST(Cli, InvalidThresholdRejected) {
    TempDir dir;
    make_corpus(dir / "corpus", 40);
    ASSERT_EQ(cli("extract --corpus " + q(dir / "corpus") + " --out " + q(dir / "o")).status, 0);
    EXPECT_EQ(cli("detect --out " + q(dir / "o") + " --theta 1.5").status, 1);
    EXPECT_EQ(cli("detect --out " + q(dir / "o") + " --theta 0").status, 1);
}

TEST(Cli, ThetaFromEnvironment) {
    TempDir dir;
    make_corpus(dir / "corpus", 60);
    ASSERT_EQ(cli("extract --corpus " + q(dir / "corpus") + " --out " + q(dir / "o")).status, 0);
    ASSERT_EQ(testing_support::run("CLONESCOPE_THETA=1.0 " + std::string(CLONESCOPE_CLI) + " detect --out " +
                                   q(dir / "o") + " >/dev/null 2>&1")
                  .status,
              0);
    for (const auto& p : load_jsonl(dir / "o/pairs-overlap.jsonl", pair_from_json)) EXPECT_EQ(p.score, 1.0);
}

TEST(Cli, ReproducibleOutputs) {
    TempDir dir;
    make_corpus(dir / "corpus", 80);
    run_pipeline(dir / "corpus", dir / "a");
    run_pipeline(dir / "corpus", dir / "b");
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        const auto name = entry.path().filename().string();
        if (name.rfind("timing", 0) == 0) continue;
        EXPECT_EQ(testing_support::read_file(entry.path()), testing_support::read_file(dir / "b" / name)) << name;
        ++compared;
    }
    EXPECT_GE(compared, 12U);
}

TEST(Cli, BenchWritesTimingCsv) {
    TempDir dir;
    const auto r = cli("bench --out " + q(dir / "o") + " --synthetic 100,200");
    ASSERT_EQ(r.status, 0) << r.out;
    const auto csv = testing_support::read_file(dir / "o/timing.csv");
    EXPECT_EQ(csv.rfind("corpus,detector,loc,method_count,seconds\n", 0), 0U);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}
