#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "clonescope/detector.hpp"
#include "clonescope/evaluator.hpp"
#include "clonescope/extractor.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace clonescope;
using testing_support::kIndustrialRows;
using testing_support::kOpenSourceRows;

namespace {

Method body(const std::string& id, const std::string& src) {
    Method m;
    m.id = id;
    m.normalized_body = scala::normalize(src);
    return m;
}

// Ground truth and predictions that realize a given confusion matrix.
std::pair<std::vector<ClonePair>, std::vector<GroundTruth>> realize(const ConfusionMatrix& m) {
    std::vector<ClonePair> pred;
    std::vector<GroundTruth> truth;
    int next = 0;
    auto add = [&](std::uint64_t n, bool clone, bool predicted) {
        for (std::uint64_t i = 0; i < n; ++i, ++next) {
            const auto a = "x" + std::to_string(next);
            const auto b = "y" + std::to_string(next);
            truth.push_back({pair_key(a, b), clone ? Label::Type3 : Label::NotClone, 2});
            if (predicted) pred.push_back(ClonePair::make(a, b, 0.9, DetectorTag::Overlap));
        }
    };
    add(m.tp, true, true);
    add(m.fp, false, true);
    add(m.fn, true, false);
    add(m.tn, false, false);
    return {pred, truth};
}

}  // namespace

TEST(Metrics, OpenSourceTableReproduces) {
    for (const auto& row : kOpenSourceRows) {
        EXPECT_EQ(row.matrix.total(), 1000U) << row.detector;
        const auto pr = precision_recall(row.matrix);
        ASSERT_TRUE(pr.precision && pr.recall);
        EXPECT_EQ(ratio_percent_1dp(*pr.precision), row.precision_pct) << row.detector;
        EXPECT_EQ(ratio_percent_1dp(*pr.recall), row.recall_pct) << row.detector;
        EXPECT_NEAR(*pr.precision * 100.0, row.precision_pct, 0.05) << row.detector;
        EXPECT_NEAR(*pr.recall * 100.0, row.recall_pct, 0.05) << row.detector;
    }
}

TEST(Metrics, IndustrialTableReproduces) {
    for (const auto& row : kIndustrialRows) {
        const auto pr = precision_recall(row.matrix);
        ASSERT_TRUE(pr.precision && pr.recall);
        EXPECT_EQ(ratio_percent_1dp(*pr.precision), row.precision_pct) << row.detector;
        EXPECT_EQ(ratio_percent_1dp(*pr.recall), row.recall_pct) << row.detector;
        EXPECT_NEAR(*pr.precision * 100.0, row.precision_pct, 0.05) << row.detector;
        EXPECT_NEAR(*pr.recall * 100.0, row.recall_pct, 0.05) << row.detector;
    }
}

TEST(Metrics, UndefinedWhenDenominatorIsZero) {
    const auto none = precision_recall({0, 0, 0, 5, 0});
    EXPECT_FALSE(none.precision);
    EXPECT_FALSE(none.recall);
    const auto only_fn = precision_recall({0, 0, 3, 0, 0});
    EXPECT_FALSE(only_fn.precision);
    ASSERT_TRUE(only_fn.recall);
    EXPECT_EQ(*only_fn.recall, 0.0);
}

TEST(Confusion, RealizedMatricesRoundTrip) {
    for (const auto* rows : {&kOpenSourceRows, &kIndustrialRows}) {
        for (const auto& row : *rows) {
            auto [pred, truth] = realize(row.matrix);
            pred.push_back(ClonePair::make("u1", "u2", 0.95, DetectorTag::Overlap));
            const auto m = confusion(pred, truth);
            EXPECT_EQ(m.tp, row.matrix.tp);
            EXPECT_EQ(m.fp, row.matrix.fp);
            EXPECT_EQ(m.fn, row.matrix.fn);
            EXPECT_EQ(m.tn, row.matrix.tn);
            EXPECT_EQ(m.unlabeled, 1U);
            EXPECT_EQ(m.total(), truth.size());
        }
    }
}

TEST(Confusion, EmptyTruthIsDomainError) {
    EXPECT_THROW(confusion({}, {}), DomainError);
}

TEST(Confusion, DuplicatePredictionsCountOnce) {
    const std::vector<GroundTruth> truth{{"a-b", Label::Type1, 2}};
    const std::vector<ClonePair> pred{ClonePair::make("a", "b", 1, DetectorTag::Identifier),
                                      ClonePair::make("b", "a", 1, DetectorTag::Ast)};
    EXPECT_EQ(confusion(pred, truth), (ConfusionMatrix{1, 0, 0, 0, 0}));
}

TEST(Percent, MatchesOracleExhaustively) {
    for (std::uint64_t total = 1; total <= 400; ++total) {
        for (std::uint64_t c = 0; c <= total; ++c) {
            ASSERT_EQ(percent_1dp(c, total), testing_support::oracle_percent(c, total)) << c << "/" << total;
        }
    }
    EXPECT_THROW(percent_1dp(1, 0), DomainError);
}

TEST(Percent, HalvesRoundUp) {
    EXPECT_EQ(percent_1dp(1, 8), 12.5);     // exactly 12.5
    EXPECT_EQ(percent_1dp(1, 16), 6.3);     // 6.25
    EXPECT_EQ(percent_1dp(1, 2000), 0.1);   // 0.05
    EXPECT_EQ(percent_1dp(1, 2001), 0.0);   // just under 0.05
    EXPECT_EQ(ratio_percent_1dp(0.996), 99.6);
}

TEST(Distribution, OpenSourceReproduces) {
    const auto d = type_distribution_from_counts(testing_support::kOpenSourceTypes);
    EXPECT_EQ(d.total, 1000U);
    double sum = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(d.percent[i], testing_support::kOpenSourceTypePct[i]) << i;
        sum += d.percent[i];
    }
    EXPECT_NEAR(sum, 100.0, 0.2);
}

TEST(Distribution, IndustrialReproduces) {
    const auto d = type_distribution_from_counts(testing_support::kIndustrialTypes);
    EXPECT_EQ(d.total, 201U);
    double sum = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(d.percent[i], testing_support::kIndustrialTypePct[i]) << i;
        sum += d.percent[i];
    }
    EXPECT_NEAR(sum, 100.0, 0.2);
}

TEST(Distribution, FromGroundTruth) {
    const std::vector<GroundTruth> truth{{"a-b", Label::Type1, 2}, {"c-d", Label::Type1, 3}, {"e-f", Label::NotClone, 2}};
    const auto d = type_distribution(truth);
    EXPECT_EQ(d.counts[0], 2U);
    EXPECT_EQ(d.counts[4], 1U);
    EXPECT_EQ(d.percent[0], 66.7);
    EXPECT_EQ(d.percent[4], 33.3);
    EXPECT_THROW(type_distribution({}), DomainError);
}

TEST(Consensus, SupportAndPluralityProperties) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto records = testing_support::random_records(80, 5, seed);
        const auto res = consensus_detail(records);
        const auto oracle = testing_support::oracle_consensus(records);
        std::map<std::string, Label> got;
        for (const auto& g : res.truth) {
            got[g.pair] = g.label;
            EXPECT_GE(g.supporting_raters, 2);
        }
        EXPECT_EQ(got, oracle) << "seed " << seed;

        std::set<std::string> pairs;
        for (const auto& r : records) pairs.insert(r.pair);
        EXPECT_EQ(res.truth.size() + res.unresolved + res.insufficient, pairs.size());
        EXPECT_TRUE(std::is_sorted(res.truth.begin(), res.truth.end(),
                                   [](const GroundTruth& a, const GroundTruth& b) { return a.pair < b.pair; }));
    }
}

TEST(Consensus, IndependentOfRecordOrderWithoutOverrides) {
    auto records = testing_support::random_records(60, 4, 9);
    // Keep only the last record of each (pair, rater) so order cannot matter.
    std::map<std::pair<std::string, std::string>, LabelRecord> last;
    for (const auto& r : records) last[{r.pair, r.rater}] = r;
    std::vector<LabelRecord> unique;
    for (const auto& [_, r] : last) unique.push_back(r);
    const auto base = consensus(unique);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10; ++i) {
        std::shuffle(unique.begin(), unique.end(), rng);
        EXPECT_EQ(consensus(unique), base);
    }
}

TEST(Consensus, SingleRaterNeverDecides) {
    std::vector<LabelRecord> records;
    for (int i = 0; i < 20; ++i) records.push_back({"p" + std::to_string(i), "solo", kAllLabels[i % 5], i});
    const auto res = consensus_detail(records);
    EXPECT_TRUE(res.truth.empty());
    EXPECT_EQ(res.insufficient, 20U);
}

TEST(Consensus, TiesAreUnresolved) {
    const std::vector<LabelRecord> records{{"p", "r1", Label::Type1, 1}, {"p", "r2", Label::Type1, 2},
                                           {"p", "r3", Label::Type3, 3}, {"p", "r4", Label::Type3, 4}};
    const auto res = consensus_detail(records);
    EXPECT_TRUE(res.truth.empty());
    EXPECT_EQ(res.unresolved, 1U);
}

TEST(Consensus, LaterRecordOverrides) {
    const std::vector<LabelRecord> records{{"p", "r1", Label::Type1, 1}, {"p", "r2", Label::Type2, 2},
                                           {"p", "r1", Label::Type2, 3}};
    const auto truth = consensus(records);
    ASSERT_EQ(truth.size(), 1U);
    EXPECT_EQ(truth[0].label, Label::Type2);
    EXPECT_EQ(truth[0].supporting_raters, 2);
}

TEST(Consensus, MajorityRuleIsStricter) {
    // 2 of 5 raters agree, the rest disagree among themselves.
    const std::vector<LabelRecord> records{{"p", "r1", Label::Type3, 1}, {"p", "r2", Label::Type3, 2},
                                           {"p", "r3", Label::Type1, 3}, {"p", "r4", Label::Type2, 4},
                                           {"p", "r5", Label::NotClone, 5}};
    EXPECT_EQ(consensus(records).size(), 1U);
    EXPECT_TRUE(consensus(records, ConsensusRule::Majority).empty());
    const std::vector<LabelRecord> three{{"q", "r1", Label::Type4, 1}, {"q", "r2", Label::Type4, 2},
                                         {"q", "r3", Label::Type1, 3}};
    EXPECT_EQ(consensus(three, ConsensusRule::Majority).size(), 1U);
}

TEST(Labels, RoundTrip) {
    for (auto l : kAllLabels) EXPECT_EQ(parse_label(to_string(l)), l);
    EXPECT_FALSE(parse_label("Type5"));
    EXPECT_FALSE(parse_label("Skip"));
    EXPECT_TRUE(is_clone(Label::Type4));
    EXPECT_FALSE(is_clone(Label::NotClone));
    EXPECT_EQ(pair_key("b", "a"), "a-b");
}

TEST(AutoClassify, TypeOneAndTypeTwo) {
    const auto a = body("a", "def f(x: Int) = {\n  x + 1\n}");
    const auto a_ws = body("b", "def f(x: Int) =   {  // c\n x+1 }");
    const auto renamed = body("c", "def g(y: Int) = { y + 2 }");
    const auto inconsistent = body("d", "def g(y: Int) = { z + 2 }");
    const auto different = body("e", "def g(y: Int) = { y - 2 }");
    EXPECT_EQ(classify_auto(a, a_ws), AutoType::Type1);
    EXPECT_EQ(classify_auto(a, renamed), AutoType::Type2);
    EXPECT_EQ(classify_auto(a, renamed, true), AutoType::Type2);
    EXPECT_EQ(classify_auto(a, inconsistent), AutoType::Type2);
    EXPECT_EQ(classify_auto(a, inconsistent, true), AutoType::Unknown);
    EXPECT_EQ(classify_auto(a, different), AutoType::Unknown);
}

TEST(AutoClassify, ListingOneIsNotTypeTwo) {
    const std::string text = testing_support::kListing1;
    const auto ms = extract_methods({"L.scala", text, count_loc(text)}, 1);
    EXPECT_EQ(classify_auto(ms[0], ms[1]), AutoType::Unknown);
}

TEST(Sampling, UniformWithoutReplacement) {
    std::vector<CandidatePair> pairs;
    for (int i = 0; i < 200; ++i) pairs.push_back({"a" + std::to_string(1000 + i), "b", 0.8});
    const auto s = sample_pairs(pairs, 50, 7);
    ASSERT_EQ(s.size(), 50U);
    std::set<std::string> keys;
    for (const auto& p : s) keys.insert(p.key());
    EXPECT_EQ(keys.size(), 50U);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end(), [](const auto& x, const auto& y) { return x.a < y.a; }));
    EXPECT_EQ(sample_pairs(pairs, 50, 7), s);
    EXPECT_NE(sample_pairs(pairs, 50, 8), s);

    // Every element should be drawn with probability n / N.
    std::vector<int> hits(pairs.size(), 0);
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        for (const auto& p : sample_pairs(pairs, 50, seed)) ++hits[std::stoul(p.a.substr(1)) - 1000];
    }
    for (int h : hits) EXPECT_NEAR(h, 500, 100);
}

TEST(Sampling, ShortListReturnsAllWithDiagnostic) {
    const std::vector<CandidatePair> pairs{{"a", "b", 0.7}, {"c", "d", 0.9}};
    Diagnostics diags;
    EXPECT_EQ(sample_pairs(pairs, 5, 1, &diags).size(), 2U);
    EXPECT_EQ(diags.size(), 1U);
}

TEST(Filter, UsesLooserThreshold) {
    auto bags = testing_support::random_bags<TokenBag>(200, 4);
    const auto loose = filter_candidates(bags);
    const auto strict = detect(bags, DetectorConfig::for_corpus(bags, 0.9));
    EXPECT_GE(loose.size(), strict.size());
    for (const auto& c : loose) EXPECT_GE(c.filter_score, 0.7);
    EXPECT_TRUE(filter_candidates({}).empty());
}

TEST(Timing, CsvSortedByLoc) {
    const auto csv = timing_report({{"c10k", "Overlap", 10000, 800, 1.5}, {"c1k", "Overlap", 1000, 80, 0.25},
                                    {"c1k", "Identifier", 1000, 80, 40.0}});
    EXPECT_EQ(csv,
              "corpus,detector,loc,method_count,seconds\n"
              "c1k,Identifier,1000,80,40.000000\n"
              "c1k,Overlap,1000,80,0.250000\n"
              "c10k,Overlap,10000,800,1.500000\n");
    EXPECT_THROW(timing_report({}), DomainError);
}

TEST(Evaluator, RaisingThresholdTradesFalsePositivesForFalseNegatives) {
    const auto bags = testing_support::random_bags<TokenBag>(160, 5);
    const auto loose = detect(bags, DetectorConfig::for_corpus(bags, 0.5));
    std::mt19937_64 rng(17);
    std::vector<GroundTruth> truth;
    for (const auto& p : loose) {
        truth.push_back({p.key(), rng() % 2 ? Label::Type3 : Label::NotClone, 2});
    }
    for (std::size_t i = 0; i + 1 < bags.size(); i += 7) {
        truth.push_back({pair_key(bags[i].method_id, bags[i + 1].method_id), Label::Type2, 2});
    }
    std::sort(truth.begin(), truth.end(), [](const auto& a, const auto& b) { return a.pair < b.pair; });
    truth.erase(std::unique(truth.begin(), truth.end(), [](const auto& a, const auto& b) { return a.pair == b.pair; }),
                truth.end());
    ConfusionMatrix prev;
    bool first = true;
    for (int pct = 50; pct <= 100; pct += 5) {
        const auto m = confusion(detect(bags, DetectorConfig::for_corpus(bags, pct / 100.0)), truth);
        if (!first) {
            EXPECT_LE(m.fp, prev.fp) << pct;
            EXPECT_GE(m.fn, prev.fn) << pct;
        }
        prev = m;
        first = false;
    }
}
