#pragma once

// JSON / JSONL encodings of every artifact exchanged between subcommands.

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "clonescope/detector.hpp"
#include "clonescope/distance.hpp"
#include "clonescope/error.hpp"
#include "clonescope/evaluator.hpp"
#include "clonescope/extractor.hpp"
#include "clonescope/representation.hpp"

namespace clonescope {

using json = nlohmann::json;

// --- per-type conversions -------------------------------------------------

inline json to_json(const Method& m) {
    return {{"id", m.id},
            {"file", m.file},
            {"name", m.name},
            {"start_line", m.start_line},
            {"end_line", m.end_line},
            {"effective_lines", m.effective_lines},
            {"normalized_body", m.normalized_body},
            {"raw_body", m.raw_body}};
}

inline Method method_from_json(const json& j) {
    Method m;
    m.id = j.at("id").get<std::string>();
    m.file = j.at("file").get<std::string>();
    m.name = j.at("name").get<std::string>();
    m.start_line = j.at("start_line").get<int>();
    m.end_line = j.at("end_line").get<int>();
    m.effective_lines = j.at("effective_lines").get<int>();
    m.normalized_body = j.at("normalized_body").get<std::string>();
    m.raw_body = j.value("raw_body", std::string{});
    return m;
}

inline json to_json(const TokenBag& b) {
    return {{"method_id", b.method_id}, {"size", b.size}, {"entries", b.entries}};
}

inline TokenBag bag_from_json(const json& j) {
    TokenBag b;
    b.method_id = j.at("method_id").get<std::string>();
    b.entries = j.at("entries").get<std::map<std::string, std::uint32_t>>();
    b.size = j.at("size").get<std::uint64_t>();
    std::uint64_t sum = 0;
    for (const auto& [_, n] : b.entries) {
        if (n == 0) throw ArtifactError("zero frequency in bag " + b.method_id);
        sum += n;
    }
    if (sum != b.size) throw ArtifactError("bag size does not match its entries for " + b.method_id);
    return b;
}

inline json to_json(const RepresentationSequence& s) {
    json j{{"method_id", s.method_id}, {"kind", to_string(s.kind)}, {"tokens", s.tokens}};
    if (s.error) j["error"] = *s.error;
    return j;
}

inline RepresentationSequence sequence_from_json(const json& j) {
    RepresentationSequence s;
    s.method_id = j.at("method_id").get<std::string>();
    s.kind = parse_repr_kind(j.at("kind").get<std::string>());
    s.tokens = j.at("tokens").get<std::vector<std::string>>();
    if (j.contains("error")) s.error = j.at("error").get<std::string>();
    s.degenerate = s.tokens.empty();
    return s;
}

inline json to_json(const ClonePair& p) {
    return {{"a", p.a}, {"b", p.b}, {"score", p.score}, {"detector", to_string(p.detector)}};
}

inline ClonePair pair_from_json(const json& j) {
    return ClonePair::make(j.at("a").get<std::string>(), j.at("b").get<std::string>(), j.at("score").get<double>(),
                           parse_detector_tag(j.at("detector").get<std::string>()));
}

inline json to_json(const CandidatePair& p) { return {{"a", p.a}, {"b", p.b}, {"filter_score", p.filter_score}}; }

inline CandidatePair candidate_from_json(const json& j) {
    CandidatePair p{j.at("a").get<std::string>(), j.at("b").get<std::string>(), j.at("filter_score").get<double>()};
    if (!(p.a < p.b)) throw ArtifactError("candidate pair is not canonical: " + p.a + ", " + p.b);
    return p;
}

inline json to_json(const LabelRecord& r) {
    return {{"pair", r.pair}, {"rater", r.rater}, {"label", to_string(r.label)}, {"timestamp", r.timestamp}};
}

inline LabelRecord label_record_from_json(const json& j) {
    LabelRecord r;
    r.pair = j.at("pair").get<std::string>();
    r.rater = j.at("rater").get<std::string>();
    auto l = parse_label(j.at("label").get<std::string>());
    if (!l) throw ArtifactError("invalid label: " + j.at("label").get<std::string>());
    r.label = *l;
    r.timestamp = j.value("timestamp", std::int64_t{0});
    return r;
}

inline json to_json(const GroundTruth& g) {
    return {{"pair", g.pair}, {"label", to_string(g.label)}, {"supporting_raters", g.supporting_raters}};
}

inline GroundTruth truth_from_json(const json& j) {
    GroundTruth g;
    g.pair = j.at("pair").get<std::string>();
    auto l = parse_label(j.at("label").get<std::string>());
    if (!l) throw ArtifactError("invalid label: " + j.at("label").get<std::string>());
    g.label = *l;
    g.supporting_raters = j.value("supporting_raters", 2);
    return g;
}

inline json to_json(const SentenceEmbedding& e) {
    return {{"method_id", e.method_id}, {"kind", to_string(e.kind)}, {"vector", e.vector}};
}

inline SentenceEmbedding embedding_from_json(const json& j) {
    return {j.at("method_id").get<std::string>(), parse_repr_kind(j.at("kind").get<std::string>()),
            j.at("vector").get<std::vector<double>>()};
}

inline json to_json(const ConfusionMatrix& m) {
    return {{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}, {"tn", m.tn}, {"unlabeled_predictions", m.unlabeled}};
}

inline ConfusionMatrix confusion_from_json(const json& j) {
    ConfusionMatrix m;
    m.tp = j.at("tp").get<std::uint64_t>();
    m.fp = j.at("fp").get<std::uint64_t>();
    m.fn = j.at("fn").get<std::uint64_t>();
    m.tn = j.at("tn").get<std::uint64_t>();
    m.unlabeled = j.value("unlabeled_predictions", std::uint64_t{0});
    return m;
}

inline json to_json(const Metrics& m) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    auto pct = [](const std::optional<double>& v) { return v ? json(ratio_percent_1dp(*v)) : json(nullptr); };
    return {{"precision", opt(m.precision)},
            {"recall", opt(m.recall)},
            {"precision_pct", pct(m.precision)},
            {"recall_pct", pct(m.recall)}};
}

inline json to_json(const TypeDistribution& d) {
    json counts = json::object();
    json pct = json::object();
    for (auto l : kAllLabels) {
        counts[std::string(to_string(l))] = d.counts[static_cast<std::size_t>(l)];
        pct[std::string(to_string(l))] = d.percent[static_cast<std::size_t>(l)];
    }
    return {{"total", d.total}, {"counts", counts}, {"percent", pct}};
}

// --- file helpers ----------------------------------------------------------

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ArtifactError("missing input artifact: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw ArtifactError("cannot write " + p.string());
    out << text;
    if (!out) throw ArtifactError("write failed for " + p.string());
}

inline std::vector<json> read_jsonl(const std::filesystem::path& p) {
    std::istringstream in(read_text(p));
    std::vector<json> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            rows.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw ArtifactError(p.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

template <class T>
std::string to_jsonl(const std::vector<T>& items) {
    std::string out;
    for (const auto& it : items) {
        out += to_json(it).dump();
        out += '\n';
    }
    return out;
}

template <class T>
void write_jsonl(const std::filesystem::path& p, const std::vector<T>& items) {
    write_text(p, to_jsonl(items));
}

template <class F>
auto load_jsonl(const std::filesystem::path& p, F&& from_json) {
    std::vector<decltype(from_json(std::declval<const json&>()))> out;
    for (const auto& row : read_jsonl(p)) {
        try {
            out.push_back(from_json(row));
        } catch (const json::exception& e) {
            throw ArtifactError(p.string() + ": " + e.what());
        }
    }
    return out;
}

inline json read_json(const std::filesystem::path& p) {
    try {
        return json::parse(read_text(p));
    } catch (const json::parse_error& e) {
        throw ArtifactError(p.string() + ": " + e.what());
    }
}

inline void write_json(const std::filesystem::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

}  // namespace clonescope
