#pragma once

// Evaluation harness: candidate filtering and sampling for labeling, rater
// consensus, confusion matrices, precision/recall, clone-type distributions
// and timing tables.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "clonescope/detector.hpp"
#include "clonescope/embedder.hpp"
#include "clonescope/error.hpp"
#include "clonescope/extractor.hpp"
#include "clonescope/scala_lexer.hpp"

namespace clonescope {

enum class Label { Type1, Type2, Type3, Type4, NotClone };

inline constexpr std::array<Label, 5> kAllLabels{Label::Type1, Label::Type2, Label::Type3, Label::Type4,
                                                 Label::NotClone};

inline std::string_view to_string(Label l) {
    switch (l) {
        case Label::Type1: return "Type1";
        case Label::Type2: return "Type2";
        case Label::Type3: return "Type3";
        case Label::Type4: return "Type4";
        case Label::NotClone: return "NotClone";
    }
    return "NotClone";
}

inline std::optional<Label> parse_label(std::string_view s) {
    for (auto l : kAllLabels) {
        if (to_string(l) == s) return l;
    }
    return std::nullopt;
}

inline bool is_clone(Label l) { return l != Label::NotClone; }

inline std::string pair_key(std::string_view a, std::string_view b) {
    return a < b ? std::string(a) + "-" + std::string(b) : std::string(b) + "-" + std::string(a);
}

struct CandidatePair {
    std::string a;
    std::string b;
    double filter_score = 0.0;

    [[nodiscard]] std::string key() const { return a + "-" + b; }
    friend bool operator==(const CandidatePair& l, const CandidatePair& r) { return l.a == r.a && l.b == r.b; }
};

/// The looser similarity pass that produces labeling candidates.
inline std::vector<CandidatePair> filter_candidates(const std::vector<TokenBag>& bags, double theta_filter = 0.70) {
    std::vector<CandidatePair> out;
    if (bags.empty()) return out;
    for (auto& p : detect(bags, DetectorConfig::for_corpus(bags, theta_filter))) {
        out.push_back({std::move(p.a), std::move(p.b), p.score});
    }
    return out;
}

/// Uniform sample without replacement, returned in input order.
inline std::vector<CandidatePair> sample_pairs(const std::vector<CandidatePair>& pairs, std::size_t n,
                                               std::uint64_t seed, Diagnostics* diags = nullptr) {
    if (n >= pairs.size()) {
        if (n > pairs.size() && diags) {
            diags->push_back("requested " + std::to_string(n) + " samples but only " + std::to_string(pairs.size()) +
                             " candidate pairs exist; returning all");
        }
        return pairs;
    }
    std::vector<std::size_t> idx(pairs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = i + uniform_below(rng, idx.size() - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    std::vector<CandidatePair> out;
    out.reserve(n);
    for (auto i : idx) out.push_back(pairs[i]);
    return out;
}

struct LabelRecord {
    std::string pair;   // "a-b"
    std::string rater;
    Label label = Label::NotClone;
    std::int64_t timestamp = 0;  // unix seconds
};

struct GroundTruth {
    std::string pair;
    Label label = Label::NotClone;
    int supporting_raters = 0;

    friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

enum class ConsensusRule {
    StrictPlurality,  // >= 2 supporters and more than any other label
    Majority,         // >= 2 supporters and more than half of the pair's raters
};

struct ConsensusResult {
    std::vector<GroundTruth> truth;  // sorted by pair
    std::size_t unresolved = 0;      // pairs whose top labels tie at >= 2 supporters
    std::size_t insufficient = 0;    // pairs where no label reaches 2 supporters or the rule fails
};

/// One vote per (pair, rater); a later record overrides an earlier one.
inline ConsensusResult consensus_detail(const std::vector<LabelRecord>& records,
                                        ConsensusRule rule = ConsensusRule::StrictPlurality) {
    std::map<std::string, std::map<std::string, Label>> votes;
    for (const auto& r : records) votes[r.pair][r.rater] = r.label;

    ConsensusResult res;
    for (const auto& [pair, by_rater] : votes) {
        std::array<int, kAllLabels.size()> count{};
        for (const auto& [_, l] : by_rater) ++count[static_cast<std::size_t>(l)];
        const auto top = std::max_element(count.begin(), count.end());
        const auto support = *top;
        const auto ties = std::count(count.begin(), count.end(), support);
        if (support < 2) {
            ++res.insufficient;
        } else if (ties > 1) {
            ++res.unresolved;
        } else if (rule == ConsensusRule::Majority && 2 * static_cast<std::size_t>(support) <= by_rater.size()) {
            ++res.insufficient;
        } else {
            res.truth.push_back({pair, kAllLabels[static_cast<std::size_t>(top - count.begin())], support});
        }
    }
    return res;
}

inline std::vector<GroundTruth> consensus(const std::vector<LabelRecord>& records,
                                          ConsensusRule rule = ConsensusRule::StrictPlurality) {
    return consensus_detail(records, rule).truth;
}

enum class AutoType { Type1, Type2, Unknown };

inline std::string_view to_string(AutoType t) {
    return t == AutoType::Type1 ? "Type1" : t == AutoType::Type2 ? "Type2" : "Unknown";
}

namespace detail {

inline bool literal_token(const scala::Token& t) {
    using K = scala::TokenKind;
    return t.kind == K::IntLiteral || t.kind == K::FloatLiteral || t.kind == K::StringLiteral ||
           t.kind == K::CharLiteral || t.kind == K::SymbolLiteral || t.is_literal();
}

inline std::vector<std::string> blind_abstraction(std::string_view normalized) {
    std::vector<std::string> out;
    for (const auto& t : scala::lex(normalized).tokens) {
        if (literal_token(t)) {
            out.emplace_back("$LIT");
        } else if (t.kind == scala::TokenKind::Identifier) {
            out.emplace_back("$ID");
        } else {
            out.push_back(t.text);
        }
    }
    return out;
}

// Identifiers and literals become $ID<n> / $LIT<n> numbered by first use.
inline std::vector<std::string> consistent_abstraction(std::string_view normalized) {
    std::unordered_map<std::string, int> ids;
    std::unordered_map<std::string, int> lits;
    std::vector<std::string> out;
    for (const auto& t : scala::lex(normalized).tokens) {
        if (literal_token(t)) {
            out.push_back("$LIT" + std::to_string(lits.try_emplace(t.text, static_cast<int>(lits.size())).first->second));
        } else if (t.kind == scala::TokenKind::Identifier) {
            out.push_back("$ID" + std::to_string(ids.try_emplace(t.text, static_cast<int>(ids.size())).first->second));
        } else {
            out.push_back(t.text);
        }
    }
    return out;
}

}  // namespace detail

/// Type1 for equal normalized bodies; Type2 when equal after abstracting
/// identifiers and literals (blindly, or as a consistent renaming when
/// `bijective`); otherwise Unknown.
inline AutoType classify_auto(const Method& a, const Method& b, bool bijective = false) {
    if (a.normalized_body == b.normalized_body) return AutoType::Type1;
    const bool same = bijective
                          ? detail::consistent_abstraction(a.normalized_body) == detail::consistent_abstraction(b.normalized_body)
                          : detail::blind_abstraction(a.normalized_body) == detail::blind_abstraction(b.normalized_body);
    return same ? AutoType::Type2 : AutoType::Unknown;
}

struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;
    std::uint64_t unlabeled = 0;  // predicted pairs with no ground truth; not part of the matrix

    [[nodiscard]] std::uint64_t total() const { return tp + fp + fn + tn; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Rows are the detector's verdict, columns the ground truth.
inline ConfusionMatrix confusion(const std::vector<ClonePair>& predicted, const std::vector<GroundTruth>& truth) {
    if (truth.empty()) throw DomainError("confusion matrix needs a non-empty ground truth");
    std::unordered_map<std::string, bool> positive;
    for (const auto& g : truth) positive[g.pair] = is_clone(g.label);
    std::unordered_set<std::string> hit;
    ConfusionMatrix m;
    for (const auto& p : predicted) {
        auto k = p.key();
        if (positive.count(k)) {
            hit.insert(std::move(k));
        } else {
            ++m.unlabeled;
        }
    }
    for (const auto& [k, pos] : positive) {
        const bool predicted_clone = hit.count(k) > 0;
        if (pos) {
            predicted_clone ? ++m.tp : ++m.fn;
        } else {
            predicted_clone ? ++m.fp : ++m.tn;
        }
    }
    return m;
}

struct Metrics {
    std::optional<double> precision;
    std::optional<double> recall;
};

inline Metrics precision_recall(const ConfusionMatrix& m) {
    Metrics r;
    if (m.tp + m.fp > 0) r.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
    if (m.tp + m.fn > 0) r.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
    return r;
}

/// count/total as a percentage rounded half-up to one decimal, computed in
/// integers so that exact halves round consistently.
inline double percent_1dp(std::uint64_t count, std::uint64_t total) {
    if (total == 0) throw DomainError("percentage of an empty total");
    const std::uint64_t tenths = (count * 2000 + total) / (2 * total);
    return static_cast<double>(tenths) / 10.0;
}

/// A ratio in [0, 1] as a percentage rounded half-up to one decimal.
inline double ratio_percent_1dp(double ratio) { return std::floor(ratio * 1000.0 + 0.5) / 10.0; }

struct TypeDistribution {
    std::array<std::uint64_t, 5> counts{};  // indexed by Label
    std::array<double, 5> percent{};
    std::uint64_t total = 0;
};

inline TypeDistribution type_distribution_from_counts(const std::array<std::uint64_t, 5>& counts) {
    TypeDistribution d;
    d.counts = counts;
    for (auto c : counts) d.total += c;
    if (d.total == 0) throw DomainError("type distribution of an empty ground truth");
    for (std::size_t i = 0; i < counts.size(); ++i) d.percent[i] = percent_1dp(counts[i], d.total);
    return d;
}

inline TypeDistribution type_distribution(const std::vector<GroundTruth>& truth) {
    std::array<std::uint64_t, 5> counts{};
    for (const auto& g : truth) ++counts[static_cast<std::size_t>(g.label)];
    return type_distribution_from_counts(counts);
}

struct TimingRun {
    std::string corpus;
    std::string detector;
    std::uint64_t loc = 0;
    std::uint64_t method_count = 0;
    double seconds = 0.0;
};

/// CSV sorted by (loc, method_count, detector, corpus).
inline std::string timing_report(std::vector<TimingRun> runs) {
    if (runs.empty()) throw DomainError("timing report needs at least one run");
    std::sort(runs.begin(), runs.end(), [](const TimingRun& x, const TimingRun& y) {
        return std::tie(x.loc, x.method_count, x.detector, x.corpus) <
               std::tie(y.loc, y.method_count, y.detector, y.corpus);
    });
    std::ostringstream os;
    os << "corpus,detector,loc,method_count,seconds\n";
    os.setf(std::ios::fixed);
    os.precision(6);
    for (const auto& r : runs) {
        os << r.corpus << ',' << r.detector << ',' << r.loc << ',' << r.method_count << ',' << r.seconds << '\n';
    }
    return os.str();
}

}  // namespace clonescope
