#pragma once

// Sentence-embedding clone detection: the four-stage embedding pipeline,
// euclidean thresholding and the union of representations.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "clonescope/detector.hpp"
#include "clonescope/embedder.hpp"
#include "clonescope/error.hpp"
#include "clonescope/rae.hpp"
#include "clonescope/representation.hpp"

namespace clonescope {

struct SentenceEmbedding {
    std::string method_id;
    ReprKind kind = ReprKind::Identifier;
    std::vector<double> vector;
};

inline double euclidean(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("embedding widths differ");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline DetectorTag detector_for(ReprKind k) { return k == ReprKind::Identifier ? DetectorTag::Identifier : DetectorTag::Ast; }

namespace detail {

inline void check_uniform(const std::vector<SentenceEmbedding>& embs) {
    for (const auto& e : embs) {
        if (e.kind != embs.front().kind) throw DomainError("mixed representation kinds in one distance run");
        if (e.vector.size() != embs.front().vector.size()) throw DomainError("mixed embedding widths in one distance run");
    }
}

}  // namespace detail

/// Every pair at euclidean distance <= delta, sorted by (a, b). With a group
/// map, only methods of the same group are compared; unmapped methods form
/// their own group "".
inline std::vector<ClonePair> detect_by_distance(const std::vector<SentenceEmbedding>& embs, double delta,
                                                 const std::map<std::string, std::string>* groups = nullptr) {
    if (!(delta >= 0.0)) throw DomainError("delta must be a non-negative number");
    if (embs.empty()) return {};
    detail::check_uniform(embs);
    const auto tag = detector_for(embs.front().kind);

    std::vector<std::string> group(embs.size());
    if (groups) {
        for (std::size_t i = 0; i < embs.size(); ++i) {
            auto it = groups->find(embs[i].method_id);
            if (it != groups->end()) group[i] = it->second;
        }
    }
    std::vector<ClonePair> out;
    for (std::size_t i = 0; i < embs.size(); ++i) {
        for (std::size_t j = i + 1; j < embs.size(); ++j) {
            if (group[i] != group[j]) continue;
            const double d = euclidean(embs[i].vector, embs[j].vector);
            if (d <= delta) out.push_back(ClonePair::make(embs[i].method_id, embs[j].method_id, d, tag));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Distance at the given percentile of pairwise distances: the smallest
/// value such that at least `percentile` of the sampled pairs lie at or
/// below it. All pairs are used when there are at most `max_pairs`.
inline double calibrate_delta(const std::vector<SentenceEmbedding>& embs, double percentile = 0.01,
                              std::size_t max_pairs = 200'000, std::uint64_t seed = 42) {
    if (embs.size() < 2) throw DomainError("delta calibration needs at least two embeddings");
    if (!(percentile > 0.0 && percentile <= 1.0)) throw DomainError("percentile must lie in (0, 1]");
    detail::check_uniform(embs);
    const std::uint64_t n = embs.size();
    const std::uint64_t total = n * (n - 1) / 2;
    std::vector<double> d;
    if (total <= max_pairs) {
        d.reserve(total);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) d.push_back(euclidean(embs[i].vector, embs[j].vector));
        }
    } else {
        std::mt19937_64 rng(seed);
        d.reserve(max_pairs);
        while (d.size() < max_pairs) {
            const auto i = uniform_below(rng, n);
            const auto j = uniform_below(rng, n);
            if (i != j) d.push_back(euclidean(embs[i].vector, embs[j].vector));
        }
    }
    std::sort(d.begin(), d.end());
    const auto k = static_cast<std::size_t>(std::ceil(percentile * static_cast<double>(d.size())));
    return d[std::max<std::size_t>(k, 1) - 1];
}

/// Set union of two canonical pair lists, tagged Combination. The score kept
/// for a shared pair is the smaller distance.
inline std::vector<ClonePair> combine(const std::vector<ClonePair>& x, const std::vector<ClonePair>& y) {
    std::map<std::pair<std::string, std::string>, double> merged;
    for (const auto* list : {&x, &y}) {
        for (const auto& p : *list) {
            auto [it, fresh] = merged.try_emplace({p.a, p.b}, p.score);
            if (!fresh) it->second = std::min(it->second, p.score);
        }
    }
    std::vector<ClonePair> out;
    out.reserve(merged.size());
    for (const auto& [k, s] : merged) out.push_back(ClonePair::make(k.first, k.second, s, DetectorTag::Combination));
    return out;
}

struct EmbeddingConfig {
    WordEmbeddingConfig words;
    RaeConfig rae;
    int min_count = 2;
    std::size_t max_sequence = 400;
};

struct EmbeddingRun {
    ReprKind kind = ReprKind::Identifier;
    Vocab vocab;
    std::vector<SentenceEmbedding> embeddings;
    std::map<std::string, std::string> errors;  // method id -> reason it has no embedding
    WordEmbeddingResult words;
    RaeTrainResult rae;
    std::vector<std::string> diagnostics;
};

/// Vocabulary, word embeddings, RAE training and per-method encoding for one
/// representation kind.
inline EmbeddingRun embed_sequences(const std::vector<RepresentationSequence>& seqs, const EmbeddingConfig& cfg) {
    if (seqs.empty()) throw DomainError("no representation sequences to embed");
    EmbeddingRun run;
    run.kind = seqs.front().kind;

    std::vector<RepresentationSequence> usable;
    for (const auto& s : seqs) {
        if (s.kind != run.kind) throw DomainError("mixed representation kinds in one embedding run");
        if (s.error) {
            run.errors[s.method_id] = *s.error;
        } else if (s.degenerate || s.tokens.empty()) {
            run.errors[s.method_id] = "empty sequence";
        } else {
            usable.push_back(s);
            if (usable.back().tokens.size() > cfg.max_sequence) {
                run.diagnostics.push_back(s.method_id + ": truncated from " + std::to_string(s.tokens.size()) +
                                          " to " + std::to_string(cfg.max_sequence) + " tokens");
                usable.back().tokens.resize(cfg.max_sequence);
            }
        }
    }
    if (!run.errors.empty()) {
        run.diagnostics.push_back(std::to_string(run.errors.size()) + " methods have no " +
                                  std::string(to_string(run.kind)) + " sequence");
    }
    if (usable.empty()) throw TrainingError("no usable sequences for the embedding pipeline");

    run.vocab = build_vocab(usable, cfg.min_count);
    std::vector<std::vector<int>> ids;
    ids.reserve(usable.size());
    for (const auto& s : usable) ids.push_back(to_ids(s, run.vocab));
    run.words = train_word_embeddings(ids, run.vocab, cfg.words);

    std::vector<Eigen::MatrixXd> leaves;
    leaves.reserve(ids.size());
    for (const auto& v : ids) leaves.push_back(leaf_matrix(v, run.words.table));
    run.rae = train_rae(leaves, cfg.words.dim, cfg.rae, &run.diagnostics);

    run.embeddings.reserve(usable.size());
    for (std::size_t i = 0; i < usable.size(); ++i) {
        const Eigen::VectorXd root = encode(run.rae.model, leaves[i]);
        if (!root.allFinite()) throw TrainingError("non-finite sentence embedding for " + usable[i].method_id);
        run.embeddings.push_back({usable[i].method_id, run.kind, std::vector<double>(root.data(), root.data() + root.size())});
    }
    return run;
}

}  // namespace clonescope
