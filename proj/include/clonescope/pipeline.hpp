#pragma once

// In-memory stages shared by the command-line tool, benchmarks and tests.

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clonescope/detector.hpp"
#include "clonescope/distance.hpp"
#include "clonescope/evaluator.hpp"
#include "clonescope/extractor.hpp"
#include "clonescope/representation.hpp"

namespace clonescope {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

struct Extraction {
    std::vector<Method> methods;
    std::vector<TokenBag> bags;
    std::vector<RepresentationSequence> identifier;
    std::vector<RepresentationSequence> ast;
    std::uint64_t loc = 0;
    Diagnostics diagnostics;
};

/// Methods, token bags and both representations for a set of files.
/// Methods whose bag would be empty are dropped with a diagnostic.
inline Extraction extract_all(const std::vector<SourceFile>& files, const ExtractConfig& cfg,
                              bool with_representations = true) {
    Extraction ex;
    for (const auto& f : files) ex.loc += static_cast<std::uint64_t>(f.loc);
    for (auto& m : extract_corpus(files, cfg.min_lines, &ex.diagnostics)) {
        auto bag = tokenize(m, cfg.token_classes, &ex.diagnostics);
        if (bag.size == 0) {
            ex.diagnostics.push_back(m.id + " (" + m.file + ":" + std::to_string(m.start_line) +
                                     "): no tokens of the selected classes; skipped");
            continue;
        }
        if (with_representations) {
            ex.identifier.push_back(extract_representation(m, ReprKind::Identifier));
            ex.ast.push_back(extract_representation(m, ReprKind::Ast));
        }
        ex.bags.push_back(std::move(bag));
        ex.methods.push_back(std::move(m));
    }
    return ex;
}

struct OverlapRun {
    std::vector<ClonePair> pairs;
    DetectStats stats;
    double seconds = 0.0;
};

inline OverlapRun run_overlap(const std::vector<TokenBag>& bags, double theta) {
    OverlapRun r;
    Stopwatch sw;
    if (!bags.empty()) r.pairs = detect(bags, DetectorConfig::for_corpus(bags, theta), &r.stats);
    r.seconds = sw.seconds();
    return r;
}

/// Project of a corpus-relative path: its first component.
inline std::string project_of(const std::string& path) {
    const auto slash = path.find('/');
    return slash == std::string::npos ? std::string{} : path.substr(0, slash);
}

struct EmbeddingDetection {
    EmbeddingRun run;
    double delta = 0.0;
    bool calibrated = false;
    std::vector<ClonePair> pairs;
    double seconds = 0.0;
};

struct EmbeddingDetectConfig {
    EmbeddingConfig embedding;
    std::optional<double> delta;  // calibrated when absent
    double percentile = 0.01;
    std::size_t calibration_pairs = 200'000;
    bool group_by_project = false;
};

inline EmbeddingDetection run_embedding(const std::vector<RepresentationSequence>& seqs,
                                        const std::vector<Method>& methods, const EmbeddingDetectConfig& cfg) {
    EmbeddingDetection d;
    Stopwatch sw;
    d.run = embed_sequences(seqs, cfg.embedding);
    if (cfg.delta) {
        d.delta = *cfg.delta;
    } else if (d.run.embeddings.size() >= 2) {
        d.delta = calibrate_delta(d.run.embeddings, cfg.percentile, cfg.calibration_pairs, cfg.embedding.words.seed);
        d.calibrated = true;
    }
    std::map<std::string, std::string> groups;
    if (cfg.group_by_project) {
        for (const auto& m : methods) groups.emplace(m.id, project_of(m.file));
    }
    d.pairs = detect_by_distance(d.run.embeddings, d.delta, cfg.group_by_project ? &groups : nullptr);
    d.seconds = sw.seconds();
    return d;
}

}  // namespace clonescope
