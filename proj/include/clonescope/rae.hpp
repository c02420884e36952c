#pragma once

// Greedy recursive autoencoder.
//
// Two adjacent vectors c1, c2 (dim each) are merged into
//
//   p = tanh(We [c1; c2] + be)
//
// and reconstructed linearly as [c1'; c2'] = Wd p + bd. The merge error is
// ||[c1; c2] - [c1'; c2']||^2. Encoding a sequence repeatedly merges the
// adjacent pair with the smallest error (leftmost on ties) until one vector,
// the sentence embedding, remains. Training minimizes the summed merge error
// of each sequence's greedy tree by stochastic gradient descent, with the
// tree held fixed while its gradient is taken. Encoder and decoder weights
// are untied.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "clonescope/embedder.hpp"
#include "clonescope/error.hpp"

namespace clonescope {

struct RaeModel {
    int dim = 0;
    Eigen::MatrixXd encode_weights;  // dim x 2dim
    Eigen::VectorXd encode_bias;     // dim
    Eigen::MatrixXd decode_weights;  // 2dim x dim
    Eigen::VectorXd decode_bias;     // 2dim

    static RaeModel random(int dim, std::uint64_t seed) {
        if (dim < 2) throw DomainError("RAE dimension must be at least 2");
        std::mt19937_64 rng(seed);
        RaeModel m;
        m.dim = dim;
        const double scale = 1.0 / std::sqrt(static_cast<double>(2 * dim));
        auto fill = [&](Eigen::MatrixXd& w, Eigen::Index rows, Eigen::Index cols) {
            w.resize(rows, cols);
            for (Eigen::Index c = 0; c < cols; ++c) {
                for (Eigen::Index r = 0; r < rows; ++r) w(r, c) = (2.0 * unit_uniform(rng) - 1.0) * scale;
            }
        };
        fill(m.encode_weights, dim, 2 * dim);
        fill(m.decode_weights, 2 * dim, dim);
        m.encode_bias = Eigen::VectorXd::Zero(dim);
        m.decode_bias = Eigen::VectorXd::Zero(2 * dim);
        return m;
    }

    [[nodiscard]] bool finite() const {
        return encode_weights.allFinite() && encode_bias.allFinite() && decode_weights.allFinite() &&
               decode_bias.allFinite();
    }
};

/// Parameter-shaped gradient.
struct RaeGradient {
    Eigen::MatrixXd encode_weights;
    Eigen::VectorXd encode_bias;
    Eigen::MatrixXd decode_weights;
    Eigen::VectorXd decode_bias;

    explicit RaeGradient(int dim)
        : encode_weights(Eigen::MatrixXd::Zero(dim, 2 * dim)),
          encode_bias(Eigen::VectorXd::Zero(dim)),
          decode_weights(Eigen::MatrixXd::Zero(2 * dim, dim)),
          decode_bias(Eigen::VectorXd::Zero(2 * dim)) {}

    [[nodiscard]] double squared_norm() const {
        return encode_weights.squaredNorm() + encode_bias.squaredNorm() + decode_weights.squaredNorm() +
               decode_bias.squaredNorm();
    }
};

/// Node ids 0..n-1 are leaves; merge k creates node n + k.
struct MergeTree {
    struct Merge {
        int left = 0;
        int right = 0;
    };
    int leaves = 0;
    std::vector<Merge> merges;
};

namespace detail {

struct MergeResult {
    Eigen::VectorXd parent;
    double error = 0.0;
};

inline MergeResult merge(const RaeModel& m, const Eigen::VectorXd& c1, const Eigen::VectorXd& c2) {
    Eigen::VectorXd children(2 * m.dim);
    children << c1, c2;
    MergeResult r;
    r.parent = (m.encode_weights * children + m.encode_bias).array().tanh();
    r.error = (m.decode_weights * r.parent + m.decode_bias - children).squaredNorm();
    return r;
}

}  // namespace detail

/// Greedy merge order for a column-per-token leaf matrix.
inline MergeTree greedy_tree(const RaeModel& model, const Eigen::MatrixXd& leaves) {
    const int n = static_cast<int>(leaves.cols());
    MergeTree tree;
    tree.leaves = n;
    if (n < 2) return tree;

    std::vector<int> frontier(static_cast<std::size_t>(n));
    std::vector<Eigen::VectorXd> vecs;
    vecs.reserve(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        frontier[static_cast<std::size_t>(i)] = i;
        vecs.emplace_back(leaves.col(i));
    }
    // Cached merge of frontier[k] with frontier[k + 1].
    std::vector<detail::MergeResult> cand;
    cand.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k + 1 < n; ++k) cand.push_back(detail::merge(model, vecs[static_cast<std::size_t>(k)], vecs[static_cast<std::size_t>(k + 1)]));

    while (frontier.size() > 1) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < cand.size(); ++k) {
            if (cand[k].error < cand[best].error) best = k;
        }
        const int node = static_cast<int>(vecs.size());
        tree.merges.push_back({frontier[best], frontier[best + 1]});
        vecs.push_back(std::move(cand[best].parent));
        frontier[best] = node;
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(best) + 1);
        cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(best));
        const auto& pv = vecs.back();
        if (best > 0) {
            cand[best - 1] = detail::merge(model, vecs[static_cast<std::size_t>(frontier[best - 1])], pv);
        }
        if (best + 1 < frontier.size()) {
            cand[best] = detail::merge(model, pv, vecs[static_cast<std::size_t>(frontier[best + 1])]);
        }
    }
    return tree;
}

/// Forward pass over a fixed tree: every node vector plus the summed error.
struct TreeForward {
    std::vector<Eigen::VectorXd> nodes;
    double loss = 0.0;
};

inline TreeForward forward(const RaeModel& model, const Eigen::MatrixXd& leaves, const MergeTree& tree) {
    TreeForward f;
    f.nodes.reserve(static_cast<std::size_t>(tree.leaves) + tree.merges.size());
    for (int i = 0; i < tree.leaves; ++i) f.nodes.emplace_back(leaves.col(i));
    for (const auto& mg : tree.merges) {
        auto r = detail::merge(model, f.nodes[static_cast<std::size_t>(mg.left)],
                               f.nodes[static_cast<std::size_t>(mg.right)]);
        f.loss += r.error;
        f.nodes.push_back(std::move(r.parent));
    }
    return f;
}

inline double tree_loss(const RaeModel& model, const Eigen::MatrixXd& leaves, const MergeTree& tree) {
    return forward(model, leaves, tree).loss;
}

/// Analytic gradient of tree_loss with respect to every model parameter,
/// back-propagated through the tree structure. Leaves are constants.
inline RaeGradient tree_gradient(const RaeModel& model, const Eigen::MatrixXd& leaves, const MergeTree& tree,
                                 double* loss = nullptr) {
    const int d = model.dim;
    const auto f = forward(model, leaves, tree);
    if (loss) *loss = f.loss;
    RaeGradient g(d);
    std::vector<Eigen::VectorXd> node_grad(f.nodes.size(), Eigen::VectorXd::Zero(d));
    Eigen::VectorXd children(2 * d);

    for (std::size_t k = tree.merges.size(); k-- > 0;) {
        const auto& mg = tree.merges[k];
        const std::size_t pid = static_cast<std::size_t>(tree.leaves) + k;
        const auto& p = f.nodes[pid];
        children << f.nodes[static_cast<std::size_t>(mg.left)], f.nodes[static_cast<std::size_t>(mg.right)];

        const Eigen::VectorXd resid = 2.0 * (model.decode_weights * p + model.decode_bias - children);
        g.decode_weights.noalias() += resid * p.transpose();
        g.decode_bias += resid;

        Eigen::VectorXd dp = node_grad[pid] + model.decode_weights.transpose() * resid;
        const Eigen::VectorXd dz = dp.array() * (1.0 - p.array().square());
        g.encode_weights.noalias() += dz * children.transpose();
        g.encode_bias += dz;

        Eigen::VectorXd dchildren = model.encode_weights.transpose() * dz - resid;
        if (mg.left >= tree.leaves) node_grad[static_cast<std::size_t>(mg.left)] += dchildren.head(d);
        if (mg.right >= tree.leaves) node_grad[static_cast<std::size_t>(mg.right)] += dchildren.tail(d);
    }
    return g;
}

/// Root vector of the greedy tree. A single leaf passes through unchanged.
inline Eigen::VectorXd encode(const RaeModel& model, const Eigen::MatrixXd& leaves) {
    if (leaves.cols() == 0) throw DomainError("cannot encode an empty sequence");
    if (leaves.cols() == 1) return leaves.col(0);
    auto tree = greedy_tree(model, leaves);
    return forward(model, leaves, tree).nodes.back();
}

inline Eigen::MatrixXd leaf_matrix(const std::vector<int>& ids, const EmbeddingTable& table) {
    Eigen::MatrixXd m(table.dim, static_cast<Eigen::Index>(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = table.vectors.col(ids[i]);
    return m;
}

struct RaeConfig {
    int epochs = 20;
    double learning_rate = 0.01;
    double decay = 0.05;       // lr_e = lr / (1 + decay * e)
    double clip_norm = 5.0;    // per-sequence gradient norm cap
    std::uint64_t seed = 42;
};

struct RaeTrainResult {
    RaeModel model;
    std::vector<double> epoch_losses;  // mean merge error during each pass
    double initial_loss = 0.0;         // mean merge error before training
    double final_loss = 0.0;           // mean merge error after training
};

/// Mean merge error over the greedy trees of every sequence.
inline double corpus_loss(const RaeModel& model, const std::vector<Eigen::MatrixXd>& sequences) {
    double total = 0.0;
    std::size_t merges = 0;
    for (const auto& s : sequences) {
        if (s.cols() < 2) continue;
        auto tree = greedy_tree(model, s);
        total += tree_loss(model, s, tree);
        merges += tree.merges.size();
    }
    return merges == 0 ? 0.0 : total / static_cast<double>(merges);
}

inline RaeTrainResult train_rae(const std::vector<Eigen::MatrixXd>& sequences, int dim, const RaeConfig& cfg,
                                std::vector<std::string>* diagnostics = nullptr) {
    RaeTrainResult result;
    result.model = RaeModel::random(dim, cfg.seed);
    auto& m = result.model;
    std::size_t skipped = 0;
    for (const auto& s : sequences) {
        if (s.cols() == 0) ++skipped;
        if (s.cols() > 0 && s.rows() != dim) throw DomainError("leaf width does not match RAE dimension");
    }
    if (skipped > 0 && diagnostics) {
        diagnostics->push_back("skipped " + std::to_string(skipped) + " empty sequences during RAE training");
    }
    result.initial_loss = corpus_loss(m, sequences);

    std::vector<std::size_t> order(sequences.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(cfg.seed + 7);
    for (int e = 0; e < cfg.epochs; ++e) {
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);
        const double lr = cfg.learning_rate / (1.0 + cfg.decay * e);
        double total = 0.0;
        std::size_t merges = 0;
        for (auto idx : order) {
            const auto& s = sequences[idx];
            if (s.cols() < 2) continue;
            auto tree = greedy_tree(m, s);
            double loss = 0.0;
            auto g = tree_gradient(m, s, tree, &loss);
            if (!std::isfinite(loss)) throw TrainingError("non-finite RAE loss");
            total += loss;
            merges += tree.merges.size();
            const double norm = std::sqrt(g.squared_norm());
            const double scale = norm > cfg.clip_norm ? lr * cfg.clip_norm / norm : lr;
            m.encode_weights -= scale * g.encode_weights;
            m.encode_bias -= scale * g.encode_bias;
            m.decode_weights -= scale * g.decode_weights;
            m.decode_bias -= scale * g.decode_bias;
        }
        if (!m.finite()) throw TrainingError("RAE parameters diverged");
        result.epoch_losses.push_back(merges == 0 ? 0.0 : total / static_cast<double>(merges));
    }
    result.final_loss = corpus_loss(m, sequences);
    return result;
}

}  // namespace clonescope
