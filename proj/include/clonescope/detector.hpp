#pragma once

// Token-bag overlap clone detector.
//
//   overlap(A, B)     = sum over tokens t of min(freq_A(t), freq_B(t))
//   similarity(A, B)  = overlap(A, B) / max(|A|, |B|)
//   clone(A, B)      <=> overlap(A, B) >= ceil(theta * max(|A|, |B|))
//
// Candidate generation uses prefix filtering over a partial inverted index.
// A bag is expanded into a set of elements (token, k) for k = 0..freq-1 so
// that multiset intersection becomes set intersection; elements are sorted
// by a global order (ascending corpus frequency, ties lexicographic). With
// bags processed in ascending size, a query x only meets indexed bags y with
// |y| <= |x|, so the required overlap of the pair is o = ceil(theta * |x|).
//
//   prefix_length(n)  = n - ceil(theta * n) + 1
//   size filter       |y| >= o
//   position filter   seen + 1 + min(|x| - i - 1, |y| - j - 1) >= o
//
// where i, j are the positions of the matching element in x and y. Any pair
// that fails a filter cannot reach o; survivors are verified exactly.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clonescope/error.hpp"
#include "clonescope/extractor.hpp"

namespace clonescope {

enum class DetectorTag { Overlap, Identifier, Ast, Combination };

inline std::string_view to_string(DetectorTag t) {
    switch (t) {
        case DetectorTag::Overlap: return "overlap";
        case DetectorTag::Identifier: return "identifier";
        case DetectorTag::Ast: return "ast";
        case DetectorTag::Combination: return "combination";
    }
    return "overlap";
}

/// Case-insensitive, so "AST" and "Overlap" are accepted too.
inline DetectorTag parse_detector_tag(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "overlap") return DetectorTag::Overlap;
    if (s == "identifier") return DetectorTag::Identifier;
    if (s == "ast") return DetectorTag::Ast;
    if (s == "combination") return DetectorTag::Combination;
    throw DomainError("unknown detector tag: " + std::string(name));
}

/// Unordered method pair stored with a < b.
struct ClonePair {
    std::string a;
    std::string b;
    double score = 0.0;  // similarity for Overlap, euclidean distance otherwise
    DetectorTag detector = DetectorTag::Overlap;

    static ClonePair make(std::string x, std::string y, double score, DetectorTag tag) {
        if (x == y) throw DomainError("a clone pair needs two distinct methods: " + x);
        if (y < x) std::swap(x, y);
        return ClonePair{std::move(x), std::move(y), score, tag};
    }

    [[nodiscard]] std::string key() const { return a + "-" + b; }

    friend bool operator==(const ClonePair& l, const ClonePair& r) { return l.a == r.a && l.b == r.b; }
    friend std::strong_ordering operator<=>(const ClonePair& l, const ClonePair& r) {
        if (auto c = l.a <=> r.a; c != 0) return c;
        return l.b <=> r.b;
    }
};

/// Similarity threshold kept as an exact fraction num/den so that boundary
/// cases such as 0.9 * 10 never misclassify.
class Threshold {
public:
    static constexpr std::int64_t kScale = 1'000'000;

    Threshold() = default;

    static Threshold from_double(double theta) {
        if (!(theta > 0.0 && theta <= 1.0)) {
            throw DomainError("threshold must lie in (0, 1], got " + std::to_string(theta));
        }
        return from_ratio(static_cast<std::int64_t>(std::llround(theta * kScale)), kScale);
    }

    static Threshold from_ratio(std::int64_t num, std::int64_t den) {
        if (den <= 0 || num <= 0 || num > den) throw DomainError("threshold ratio must lie in (0, 1]");
        if (den > kScale) throw DomainError("threshold denominator exceeds 1e6");
        const auto g = std::gcd(num, den);
        Threshold t;
        t.num_ = num / g;
        t.den_ = den / g;
        return t;
    }

    /// ceil(theta * size)
    [[nodiscard]] std::uint64_t required(std::uint64_t size) const {
        const auto n = static_cast<std::uint64_t>(num_);
        const auto d = static_cast<std::uint64_t>(den_);
        return (n * size + d - 1) / d;
    }

    /// overlap / max_size >= theta. Bag sizes fit in 32 bits and den <= 1e6,
    /// so the cross products cannot overflow.
    [[nodiscard]] bool admits(std::uint64_t overlap, std::uint64_t max_size) const {
        return overlap * static_cast<std::uint64_t>(den_) >= max_size * static_cast<std::uint64_t>(num_);
    }

    [[nodiscard]] double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    [[nodiscard]] std::int64_t numerator() const { return num_; }
    [[nodiscard]] std::int64_t denominator() const { return den_; }

private:
    std::int64_t num_ = 9;
    std::int64_t den_ = 10;
};

inline std::uint64_t overlap(const TokenBag& a, const TokenBag& b) {
    std::uint64_t total = 0;
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    while (ia != a.entries.end() && ib != b.entries.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            total += std::min(ia->second, ib->second);
            ++ia;
            ++ib;
        }
    }
    return total;
}

inline double similarity(const TokenBag& a, const TokenBag& b) {
    if (a.size == 0 || b.size == 0) throw DomainError("similarity is undefined for an empty bag");
    return static_cast<double>(overlap(a, b)) / static_cast<double>(std::max(a.size, b.size));
}

inline std::uint64_t required_overlap(std::uint64_t size_a, std::uint64_t size_b, const Threshold& theta) {
    return theta.required(std::max(size_a, size_b));
}

inline std::uint64_t prefix_length(std::uint64_t size, const Threshold& theta) {
    if (size == 0) return 0;
    return size - theta.required(size) + 1;
}

/// Global token order: ascending corpus frequency, ties broken lexicographically.
class TokenOrder {
public:
    static TokenOrder from_bags(const std::vector<TokenBag>& bags) {
        std::unordered_map<std::string, std::uint64_t> freq;
        for (const auto& bag : bags) {
            for (const auto& [tok, n] : bag.entries) freq[tok] += n;
        }
        std::vector<std::pair<std::string, std::uint64_t>> sorted(freq.begin(), freq.end());
        std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
            return x.second != y.second ? x.second < y.second : x.first < y.first;
        });
        TokenOrder order;
        order.rank_.reserve(sorted.size());
        for (std::uint32_t r = 0; r < sorted.size(); ++r) order.rank_.emplace(sorted[r].first, r);
        return order;
    }

    [[nodiscard]] std::uint32_t rank(const std::string& token) const {
        auto it = rank_.find(token);
        if (it == rank_.end()) throw DomainError("token missing from the global order: " + token);
        return it->second;
    }

    [[nodiscard]] std::size_t size() const { return rank_.size(); }

private:
    std::unordered_map<std::string, std::uint32_t> rank_;
};

struct DetectorConfig {
    Threshold theta;
    TokenOrder token_order;

    static DetectorConfig for_corpus(const std::vector<TokenBag>& bags, double theta) {
        return DetectorConfig{Threshold::from_double(theta), TokenOrder::from_bags(bags)};
    }
};

struct Posting {
    std::uint32_t bag = 0;       // index into the input bag list
    std::uint32_t bag_size = 0;
    std::uint32_t position = 0;  // position in the ordered element list
};

struct PartialIndex {
    std::unordered_map<std::uint64_t, std::vector<Posting>> postings;

    [[nodiscard]] std::size_t entry_count() const {
        std::size_t n = 0;
        for (const auto& [_, list] : postings) n += list.size();
        return n;
    }
};

struct DetectStats {
    std::uint64_t bags = 0;
    std::uint64_t index_entries = 0;
    std::uint64_t candidates_verified = 0;
    std::uint64_t brute_force_comparisons = 0;
    std::uint64_t pairs = 0;
};

namespace detail {

/// Sorted element keys (rank << 32 | occurrence) of a bag.
inline std::vector<std::uint64_t> ordered_elements(const TokenBag& bag, const TokenOrder& order) {
    std::vector<std::uint64_t> out;
    out.reserve(bag.size);
    for (const auto& [tok, n] : bag.entries) {
        const std::uint64_t r = order.rank(tok);
        for (std::uint32_t k = 0; k < n; ++k) out.push_back((r << 32U) | k);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<std::uint32_t> size_order(const std::vector<TokenBag>& bags) {
    std::vector<std::uint32_t> idx(bags.size());
    std::iota(idx.begin(), idx.end(), 0U);
    std::stable_sort(idx.begin(), idx.end(), [&](std::uint32_t x, std::uint32_t y) {
        return bags[x].size != bags[y].size ? bags[x].size < bags[y].size
                                            : bags[x].method_id < bags[y].method_id;
    });
    return idx;
}

/// Exact overlap of two sorted element lists; stops once `needed` is out of reach.
inline std::uint64_t verify(const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y,
                            std::uint64_t needed) {
    std::size_t i = 0;
    std::size_t j = 0;
    std::uint64_t common = 0;
    while (i < x.size() && j < y.size()) {
        if (common + std::min(x.size() - i, y.size() - j) < needed) return common;
        if (x[i] == y[j]) {
            ++common;
            ++i;
            ++j;
        } else if (x[i] < y[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return common;
}

}  // namespace detail

/// Index over each bag's prefix, bags inserted in ascending size order.
inline PartialIndex build_index(const std::vector<TokenBag>& bags, const DetectorConfig& config) {
    PartialIndex index;
    for (auto id : detail::size_order(bags)) {
        const auto elems = detail::ordered_elements(bags[id], config.token_order);
        const auto p = prefix_length(elems.size(), config.theta);
        for (std::uint32_t pos = 0; pos < p; ++pos) {
            index.postings[elems[pos]].push_back(
                Posting{id, static_cast<std::uint32_t>(elems.size()), pos});
        }
    }
    return index;
}

/// All pairs with similarity >= theta, sorted by (a, b).
inline std::vector<ClonePair> detect(const std::vector<TokenBag>& bags, const DetectorConfig& config,
                                     DetectStats* stats = nullptr) {
    const std::size_t n = bags.size();
    std::vector<std::vector<std::uint64_t>> elems(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (bags[i].size == 0) throw DomainError("empty token bag for method " + bags[i].method_id);
        elems[i] = detail::ordered_elements(bags[i], config.token_order);
    }

    PartialIndex index;
    std::vector<ClonePair> out;
    DetectStats local;
    local.bags = n;
    local.brute_force_comparisons = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;

    // Per-candidate accumulated prefix overlap; -1 marks a pruned candidate.
    std::vector<std::int64_t> seen(n, 0);
    std::vector<std::uint32_t> touched;

    for (auto x : detail::size_order(bags)) {
        const auto& ex = elems[x];
        const std::uint64_t size_x = ex.size();
        const std::uint64_t needed = config.theta.required(size_x);
        const std::uint64_t probe = size_x - needed + 1;

        for (std::uint64_t i = 0; i < probe; ++i) {
            auto it = index.postings.find(ex[i]);
            if (it == index.postings.end()) continue;
            const auto& list = it->second;
            // Postings are in ascending bag size; skip those too small to qualify.
            auto first = std::lower_bound(list.begin(), list.end(), needed,
                                          [](const Posting& p, std::uint64_t v) { return p.bag_size < v; });
            for (auto p = first; p != list.end(); ++p) {
                auto& acc = seen[p->bag];
                if (acc < 0) continue;
                if (acc == 0) touched.push_back(p->bag);
                const std::uint64_t rest = std::min(size_x - i - 1, std::uint64_t{p->bag_size} - p->position - 1);
                if (static_cast<std::uint64_t>(acc) + 1 + rest >= needed) {
                    ++acc;
                } else {
                    acc = -1;
                }
            }
        }

        for (auto y : touched) {
            if (seen[y] > 0) {
                ++local.candidates_verified;
                const auto common = detail::verify(ex, elems[y], needed);
                if (config.theta.admits(common, size_x)) {
                    out.push_back(ClonePair::make(bags[x].method_id, bags[y].method_id,
                                                  static_cast<double>(common) / static_cast<double>(size_x),
                                                  DetectorTag::Overlap));
                }
            }
            seen[y] = 0;
        }
        touched.clear();

        for (std::uint32_t pos = 0; pos < probe; ++pos) {
            index.postings[ex[pos]].push_back(Posting{static_cast<std::uint32_t>(x),
                                                      static_cast<std::uint32_t>(size_x), pos});
        }
        local.index_entries += probe;
    }

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    local.pairs = out.size();
    if (stats) *stats = local;
    return out;
}

/// Direct O(n^2) evaluation of every pair; the correctness oracle for detect().
inline std::vector<ClonePair> brute_force_detect(const std::vector<TokenBag>& bags, const Threshold& theta) {
    std::vector<ClonePair> out;
    for (std::size_t i = 0; i < bags.size(); ++i) {
        for (std::size_t j = i + 1; j < bags.size(); ++j) {
            const auto common = overlap(bags[i], bags[j]);
            const auto max_size = std::max(bags[i].size, bags[j].size);
            if (theta.admits(common, max_size)) {
                out.push_back(ClonePair::make(bags[i].method_id, bags[j].method_id,
                                              static_cast<double>(common) / static_cast<double>(max_size),
                                              DetectorTag::Overlap));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace clonescope
