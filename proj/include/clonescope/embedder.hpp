#pragma once

// Word embeddings for representation sequences.
//
// A vocabulary maps tokens seen at least `min_count` times to dense ids
// (id 0 is the out-of-vocabulary bucket). Embeddings are the input vectors
// of a small Elman recurrent network trained to predict the next token of
// each sequence:
//
//   h_t  = tanh(Wx e(x_t) + Wh h_{t-1} + b)
//   loss = -log sigmoid(u_{x_{t+1}} . h_t + c_{x_{t+1}})
//          - sum_{n in negatives} log sigmoid(-(u_n . h_t + c_n))
//
// Negatives are drawn from the unigram distribution raised to 0.75.
// Gradients are truncated to one step (h_{t-1} is treated as constant).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "clonescope/error.hpp"
#include "clonescope/representation.hpp"

namespace clonescope {

/// Uniform double in [0, 1) from a 64-bit engine; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11U) * 0x1.0p-53;
}

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    // Lemire-style rejection keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r = 0;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

struct Vocab {
    static constexpr int kUnk = 0;
    std::unordered_map<std::string, int> ids;
    std::vector<std::string> tokens{"<unk>"};
    std::vector<std::uint64_t> counts{0};
    int unk_id = kUnk;

    [[nodiscard]] int id(const std::string& token) const {
        auto it = ids.find(token);
        return it == ids.end() ? unk_id : it->second;
    }
    [[nodiscard]] int size() const { return static_cast<int>(tokens.size()); }
};

/// Tokens with corpus frequency >= min_count, ordered by descending count then text.
inline Vocab build_vocab(const std::vector<RepresentationSequence>& sequences, int min_count) {
    if (sequences.empty()) throw DomainError("cannot build a vocabulary from no sequences");
    std::unordered_map<std::string, std::uint64_t> freq;
    for (const auto& s : sequences) {
        for (const auto& t : s.tokens) ++freq[t];
    }
    std::vector<std::pair<std::string, std::uint64_t>> kept;
    std::uint64_t dropped = 0;
    for (auto& [tok, n] : freq) {
        if (n >= static_cast<std::uint64_t>(std::max(min_count, 1))) {
            kept.emplace_back(tok, n);
        } else {
            dropped += n;
        }
    }
    if (kept.empty()) throw TrainingError("degenerate vocabulary: no token reaches min_count");
    std::sort(kept.begin(), kept.end(), [](const auto& x, const auto& y) {
        return x.second != y.second ? x.second > y.second : x.first < y.first;
    });
    Vocab v;
    v.counts[0] = dropped;
    for (auto& [tok, n] : kept) {
        v.ids.emplace(tok, v.size());
        v.tokens.push_back(tok);
        v.counts.push_back(n);
    }
    return v;
}

inline std::vector<int> to_ids(const RepresentationSequence& seq, const Vocab& vocab) {
    std::vector<int> ids;
    ids.reserve(seq.tokens.size());
    for (const auto& t : seq.tokens) ids.push_back(vocab.id(t));
    return ids;
}

struct EmbeddingTable {
    int dim = 0;
    Eigen::MatrixXd vectors;  // dim x |vocab|, one column per token id

    [[nodiscard]] Eigen::VectorXd vector(int id) const { return vectors.col(id); }
    [[nodiscard]] int vocab_size() const { return static_cast<int>(vectors.cols()); }
};

struct WordEmbeddingConfig {
    int dim = 50;
    int epochs = 20;
    double learning_rate = 0.01;
    double decay = 0.05;  // lr_e = lr / (1 + decay * e)
    int negatives = 5;
    std::uint64_t seed = 42;
};

/// Seeded initial table; training with zero epochs returns exactly this.
inline EmbeddingTable initial_embeddings(int vocab_size, int dim, std::uint64_t seed) {
    if (dim < 2) throw DomainError("embedding dimension must be at least 2");
    std::mt19937_64 rng(seed);
    EmbeddingTable t;
    t.dim = dim;
    t.vectors.resize(dim, vocab_size);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (Eigen::Index c = 0; c < t.vectors.cols(); ++c) {
        for (Eigen::Index r = 0; r < t.vectors.rows(); ++r) t.vectors(r, c) = (unit_uniform(rng) - 0.5) * scale;
    }
    return t;
}

struct WordEmbeddingResult {
    EmbeddingTable table;
    std::vector<double> epoch_losses;  // running mean loss of each pass
    double initial_loss = 0.0;         // mean loss before training
    double final_loss = 0.0;           // mean loss after training
};

namespace detail {

class NextTokenModel {
public:
    NextTokenModel(const Vocab& vocab, const WordEmbeddingConfig& cfg)
        : cfg_(cfg), rng_(cfg.seed ^ 0x9E3779B97F4A7C15ULL) {
        table_ = initial_embeddings(vocab.size(), cfg.dim, cfg.seed);
        const int d = cfg.dim;
        const double scale = 1.0 / std::sqrt(static_cast<double>(d));
        auto fill = [&](Eigen::MatrixXd& m) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = (unit_uniform(rng_) - 0.5) * scale;
            }
        };
        wx_.resize(d, d);
        wh_.resize(d, d);
        out_.resize(d, vocab.size());
        fill(wx_);
        fill(wh_);
        fill(out_);
        bias_ = Eigen::VectorXd::Zero(d);
        out_bias_ = Eigen::VectorXd::Zero(vocab.size());

        std::vector<double> weights(vocab.counts.size());
        for (std::size_t i = 0; i < weights.size(); ++i) {
            weights[i] = std::pow(static_cast<double>(vocab.counts[i]), 0.75);
        }
        cumulative_.resize(weights.size());
        std::partial_sum(weights.begin(), weights.end(), cumulative_.begin());
    }

    // Mean loss per prediction; updates parameters when lr > 0.
    double pass(const std::vector<std::vector<int>>& seqs, double lr, std::mt19937_64& rng) {
        double total = 0.0;
        std::uint64_t steps = 0;
        const int d = cfg_.dim;
        Eigen::VectorXd h_prev(d);
        Eigen::VectorXd h(d);
        Eigen::VectorXd dh(d);
        Eigen::VectorXd dz(d);
        Eigen::VectorXd de(d);
        std::vector<int> negs(static_cast<std::size_t>(cfg_.negatives));
        std::vector<double> gn(negs.size());
        for (const auto& s : seqs) {
            h_prev.setZero();
            for (std::size_t t = 0; t + 1 < s.size(); ++t) {
                const int x = s[t];
                const int target = s[t + 1];
                h = (wx_ * table_.vectors.col(x) + wh_ * h_prev + bias_).array().tanh();
                for (auto& n : negs) n = sample(rng);

                const double sp = out_.col(target).dot(h) + out_bias_(target);
                double loss = -log_sigmoid(sp);
                const double gp = sigmoid(sp) - 1.0;
                dh = gp * out_.col(target);
                for (std::size_t k = 0; k < negs.size(); ++k) {
                    const double sn = out_.col(negs[k]).dot(h) + out_bias_(negs[k]);
                    loss -= log_sigmoid(-sn);
                    gn[k] = sigmoid(sn);
                    dh += gn[k] * out_.col(negs[k]);
                }
                if (!std::isfinite(loss)) throw TrainingError("non-finite word-embedding loss");
                total += loss;
                ++steps;

                if (lr > 0.0) {
                    out_.col(target) -= lr * gp * h;
                    out_bias_(target) -= lr * gp;
                    for (std::size_t k = 0; k < negs.size(); ++k) {
                        out_.col(negs[k]) -= lr * gn[k] * h;
                        out_bias_(negs[k]) -= lr * gn[k];
                    }
                    dz = dh.array() * (1.0 - h.array().square());
                    de = wx_.transpose() * dz;
                    wx_.noalias() -= lr * dz * table_.vectors.col(x).transpose();
                    wh_.noalias() -= lr * dz * h_prev.transpose();
                    bias_ -= lr * dz;
                    table_.vectors.col(x) -= lr * de;
                }
                h_prev = h;
            }
        }
        return steps == 0 ? 0.0 : total / static_cast<double>(steps);
    }

    [[nodiscard]] const EmbeddingTable& table() const { return table_; }

private:
    static double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }
    static double log_sigmoid(double v) {
        return v >= 0 ? -std::log1p(std::exp(-v)) : v - std::log1p(std::exp(v));
    }

    int sample(std::mt19937_64& rng) const {
        const double r = unit_uniform(rng) * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
        return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                         static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
    }

    WordEmbeddingConfig cfg_;
    std::mt19937_64 rng_;
    EmbeddingTable table_;
    Eigen::MatrixXd wx_, wh_, out_;
    Eigen::VectorXd bias_, out_bias_;
    std::vector<double> cumulative_;
};

}  // namespace detail

inline WordEmbeddingResult train_word_embeddings(const std::vector<std::vector<int>>& sequences,
                                                 const Vocab& vocab, const WordEmbeddingConfig& cfg) {
    if (cfg.dim < 2) throw DomainError("embedding dimension must be at least 2");
    detail::NextTokenModel model(vocab, cfg);
    const std::uint64_t eval_seed = cfg.seed + 1;

    WordEmbeddingResult result;
    std::mt19937_64 eval_rng(eval_seed);
    result.initial_loss = model.pass(sequences, 0.0, eval_rng);

    std::mt19937_64 rng(cfg.seed + 2);
    for (int e = 0; e < cfg.epochs; ++e) {
        const double lr = cfg.learning_rate / (1.0 + cfg.decay * e);
        result.epoch_losses.push_back(model.pass(sequences, lr, rng));
    }
    eval_rng.seed(eval_seed);
    result.final_loss = cfg.epochs == 0 ? result.initial_loss : model.pass(sequences, 0.0, eval_rng);
    result.table = model.table();
    return result;
}

}  // namespace clonescope
