#pragma once

// Label collection backend: a durable journal of rater judgments and the
// service logic that hands out candidate pairs and gathers labels.

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "clonescope/artifacts.hpp"
#include "clonescope/error.hpp"
#include "clonescope/evaluator.hpp"
#include "clonescope/extractor.hpp"

namespace clonescope {

inline constexpr std::string_view kSkip = "Skip";

/// A journaled action: a label, or a skip when `label` is empty.
struct JournalEntry {
    std::string pair;
    std::string rater;
    std::optional<Label> label;
    std::int64_t timestamp = 0;
};

inline json to_json(const JournalEntry& e) {
    return {{"pair", e.pair},
            {"rater", e.rater},
            {"label", e.label ? std::string(to_string(*e.label)) : std::string(kSkip)},
            {"timestamp", e.timestamp}};
}

inline JournalEntry journal_entry_from_json(const json& j) {
    JournalEntry e;
    e.pair = j.at("pair").get<std::string>();
    e.rater = j.at("rater").get<std::string>();
    const auto text = j.at("label").get<std::string>();
    if (text != kSkip) {
        e.label = parse_label(text);
        if (!e.label) throw ArtifactError("invalid label in journal: " + text);
    }
    e.timestamp = j.value("timestamp", std::int64_t{0});
    return e;
}

/// Reads a labels.jsonl journal, keeping the last action per (pair, rater).
inline std::vector<JournalEntry> read_label_journal(const std::filesystem::path& p) {
    std::map<std::pair<std::string, std::string>, JournalEntry> last;
    for (auto& e : load_jsonl(p, journal_entry_from_json)) {
        auto key = std::make_pair(e.pair, e.rater);
        auto it = last.find(key);
        // A skip never erases an earlier label from the same rater.
        if (it != last.end() && it->second.label && !e.label) continue;
        last.insert_or_assign(std::move(key), std::move(e));
    }
    std::vector<JournalEntry> out;
    out.reserve(last.size());
    for (auto& [_, e] : last) out.push_back(std::move(e));
    return out;
}

inline std::vector<LabelRecord> label_records(const std::vector<JournalEntry>& entries) {
    std::vector<LabelRecord> out;
    for (const auto& e : entries) {
        if (e.label) out.push_back({e.pair, e.rater, *e.label, e.timestamp});
    }
    return out;
}

/// Append-only JSONL journal. Every append is flushed to stable storage
/// before it returns; opening compacts the file to one line per (pair, rater).
class LabelStore {
public:
    explicit LabelStore(std::filesystem::path path) : path_(std::move(path)) {
        if (std::filesystem::exists(path_)) entries_ = read_label_journal(path_);
        compact();
        fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
        if (fd_ < 0) throw ArtifactError("cannot open label journal " + path_.string() + ": " + std::strerror(errno));
    }
    LabelStore(const LabelStore&) = delete;
    LabelStore& operator=(const LabelStore&) = delete;
    ~LabelStore() {
        if (fd_ >= 0) ::close(fd_);
    }

    [[nodiscard]] const std::vector<JournalEntry>& entries() const { return entries_; }
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

    void append(const JournalEntry& e) {
        const std::string line = to_json(e).dump() + "\n";
        write_all(fd_, line);
        if (::fsync(fd_) != 0) throw ArtifactError("fsync failed on " + path_.string());
        entries_.push_back(e);
    }

private:
    static void write_all(int fd, const std::string& data) {
        std::size_t done = 0;
        while (done < data.size()) {
            const auto n = ::write(fd, data.data() + done, data.size() - done);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw ArtifactError(std::string("journal write failed: ") + std::strerror(errno));
            }
            done += static_cast<std::size_t>(n);
        }
    }

    void compact() {
        if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
        auto tmp = path_;
        tmp += ".tmp";
        const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
        if (fd < 0) throw ArtifactError("cannot write " + tmp.string());
        std::string body;
        for (const auto& e : entries_) body += to_json(e).dump() + "\n";
        write_all(fd, body);
        ::fsync(fd);
        ::close(fd);
        std::filesystem::rename(tmp, path_);
    }

    std::filesystem::path path_;
    std::vector<JournalEntry> entries_;
    int fd_ = -1;
};

inline const json& clone_type_definitions() {
    static const json defs = {
        {"Type1", "Identical code fragments except for differences in whitespace, comments and layout."},
        {"Type2", "Identical code fragments except for differences in identifier names and literal values, "
                  "in addition to Type-1 differences."},
        {"Type3", "Syntactically similar code fragments with added, modified and/or removed statements, "
                  "in addition to Type-1 and Type-2 differences."},
        {"Type4", "Syntactically different code fragments that implement the same functionality."},
        {"NotClone", "The two methods are not clones."},
    };
    return defs;
}

struct Progress {
    std::size_t labeled = 0;    // stored labels across all raters (skips excluded)
    std::size_t consensus = 0;  // pairs with a consensus label
    std::size_t remaining = 0;  // candidate pairs still without consensus
    std::size_t skipped = 0;
};

inline json to_json(const Progress& p) {
    return {{"labeled", p.labeled}, {"consensus", p.consensus}, {"remaining", p.remaining}, {"skipped", p.skipped}};
}

enum class SubmitStatus { Ok, NotFound, Invalid };

struct SubmitResult {
    SubmitStatus status = SubmitStatus::Ok;
    std::string message;
    Progress progress;
};

struct LabelServiceConfig {
    bool second_rater_first = false;
    std::uint64_t seed = 42;
};

class LabelService {
public:
    LabelService(std::vector<CandidatePair> candidates, const std::vector<Method>& methods,
                 std::filesystem::path journal, LabelServiceConfig cfg = {})
        : candidates_(std::move(candidates)), store_(std::move(journal)), cfg_(cfg), rng_(cfg.seed) {
        for (std::size_t i = 0; i < candidates_.size(); ++i) index_.emplace(candidates_[i].key(), i);
        for (const auto& m : methods) methods_.emplace(m.id, m);
        for (const auto& c : candidates_) {
            if (!methods_.count(c.a) || !methods_.count(c.b)) {
                throw ArtifactError("candidate pair " + c.key() + " refers to an unknown method");
            }
        }
        for (const auto& e : store_.entries()) apply(e);
    }

    /// A uniformly random pair the rater has neither labeled nor skipped.
    std::optional<json> next_pair(const std::string& rater) {
        std::unique_lock lock(mutex_);
        std::vector<std::size_t> open;
        std::vector<std::size_t> preferred;
        for (std::size_t i = 0; i < candidates_.size(); ++i) {
            const auto& key = candidates_[i].key();
            if (acted_.count({key, rater})) continue;
            open.push_back(i);
            if (cfg_.second_rater_first && label_count(key) == 1) preferred.push_back(i);
        }
        const auto& pool = preferred.empty() ? open : preferred;
        if (pool.empty()) return std::nullopt;
        const auto pick = pool[uniform_below(rng_, pool.size())];
        return payload(candidates_[pick]);
    }

    SubmitResult submit(const std::string& rater, const std::string& pair_id, const std::string& label) {
        SubmitResult r;
        if (rater.empty() || rater.size() > 128) {
            r.status = SubmitStatus::Invalid;
            r.message = "rater id must be 1-128 characters";
            return r;
        }
        std::optional<Label> parsed;
        if (label != kSkip) {
            parsed = parse_label(label);
            if (!parsed) {
                r.status = SubmitStatus::Invalid;
                r.message = "label must be one of Type1, Type2, Type3, Type4, NotClone, Skip";
                return r;
            }
        }
        std::unique_lock lock(mutex_);
        if (!index_.count(pair_id)) {
            r.status = SubmitStatus::NotFound;
            r.message = "unknown pair " + pair_id;
            return r;
        }
        JournalEntry e{pair_id, rater, parsed, now()};
        if (!e.label && has_label(pair_id, rater)) {
            r.progress = progress_locked();
            return r;
        }
        store_.append(e);
        apply(e);
        r.progress = progress_locked();
        return r;
    }

    Progress progress() const {
        std::shared_lock lock(mutex_);
        return progress_locked();
    }

    std::vector<GroundTruth> export_truth() const {
        std::shared_lock lock(mutex_);
        return consensus(records_locked());
    }

    std::vector<LabelRecord> records() const {
        std::shared_lock lock(mutex_);
        return records_locked();
    }

    [[nodiscard]] std::size_t candidate_count() const { return candidates_.size(); }

private:
    using Key = std::pair<std::string, std::string>;  // (pair, rater)

    static std::int64_t now() {
        return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
            .count();
    }

    void apply(const JournalEntry& e) {
        Key k{e.pair, e.rater};
        auto it = acted_.find(k);
        if (it != acted_.end() && it->second && !e.label) return;
        acted_.insert_or_assign(std::move(k), e.label);
    }

    bool has_label(const std::string& pair, const std::string& rater) const {
        auto it = acted_.find({pair, rater});
        return it != acted_.end() && it->second.has_value();
    }

    std::size_t label_count(const std::string& pair) const {
        std::size_t n = 0;
        for (auto it = acted_.lower_bound({pair, std::string{}}); it != acted_.end() && it->first.first == pair; ++it) {
            if (it->second) ++n;
        }
        return n;
    }

    std::vector<LabelRecord> records_locked() const {
        std::vector<LabelRecord> out;
        for (const auto& [k, l] : acted_) {
            if (l) out.push_back({k.first, k.second, *l, 0});
        }
        return out;
    }

    Progress progress_locked() const {
        Progress p;
        for (const auto& [_, l] : acted_) l ? ++p.labeled : ++p.skipped;
        p.consensus = consensus(records_locked()).size();
        p.remaining = candidates_.size() - std::min(candidates_.size(), p.consensus);
        return p;
    }

    json method_json(const std::string& id) const {
        const auto& m = methods_.at(id);
        return {{"id", m.id},
                {"name", m.name},
                {"file", m.file},
                {"start_line", m.start_line},
                {"end_line", m.end_line},
                {"raw_body", m.raw_body}};
    }

    json payload(const CandidatePair& c) const {
        return {{"pair_id", c.key()},
                {"filter_score", c.filter_score},
                {"a", method_json(c.a)},
                {"b", method_json(c.b)},
                {"definitions", clone_type_definitions()}};
    }

    std::vector<CandidatePair> candidates_;
    std::unordered_map<std::string, std::size_t> index_;
    std::unordered_map<std::string, Method> methods_;
    LabelStore store_;
    LabelServiceConfig cfg_;
    std::mt19937_64 rng_;
    std::map<Key, std::optional<Label>> acted_;
    mutable std::shared_mutex mutex_;
};

}  // namespace clonescope
