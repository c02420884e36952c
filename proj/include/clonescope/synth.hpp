#pragma once

// Seeded generator of synthetic Scala corpora with injected Type-1, Type-2
// and Type-3 clones. Used for benchmarks and tests where no real corpus is
// at hand.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "clonescope/artifacts.hpp"
#include "clonescope/embedder.hpp"
#include "clonescope/extractor.hpp"

namespace clonescope::synth {

struct Config {
    std::size_t projects = 1;
    std::size_t methods = 100;
    std::size_t methods_per_file = 8;
    double clone_rate = 0.2;  // fraction of methods that copy an earlier one
    std::uint64_t seed = 42;
};

enum class CloneKind { Type1, Type2, Type3 };

struct InjectedClone {
    std::string original_file;
    std::string original_name;
    std::string copy_file;
    std::string copy_name;
    CloneKind kind = CloneKind::Type1;
};

struct Corpus {
    std::vector<SourceFile> files;
    std::vector<InjectedClone> clones;
    std::size_t methods = 0;
};

namespace detail {

inline constexpr const char* kWords[] = {
    "count", "total", "index", "value", "result", "buffer", "item", "node", "edge", "weight", "score", "limit",
    "offset", "size", "depth", "width", "height", "name", "label", "key", "entry", "record", "row", "column",
    "cell", "frame", "window", "event", "signal", "order", "price", "amount", "balance", "account", "user",
    "session", "token", "request", "response", "header", "body", "payload", "message", "queue", "stack",
    "cache", "store", "table", "query", "filter", "mapper", "reducer", "parser", "lexer", "source", "target",
    "path", "file", "line", "char", "word", "text", "input", "output", "state", "config", "option", "flag",
    "mode", "level", "step", "round", "epoch", "batch", "chunk", "block", "segment", "range", "span", "delta",
    "acc", "sum", "prod", "max", "min", "avg", "mean", "median", "ratio", "rate", "speed", "time", "date",
    "year", "month", "day", "hour", "color", "shape", "point", "vector", "matrix", "graph", "tree", "leaf",
    "root", "parent", "child", "sibling", "left", "right", "head", "tail", "first", "last", "next", "prev",
};

inline constexpr const char* kVerbs[] = {
    "compute", "update", "merge", "collect", "resolve", "build", "render", "parse", "load", "scan", "apply",
    "check", "count", "sum", "filter", "transform", "normalize", "validate", "encode", "decode", "fetch",
    "select", "split", "join", "sort", "group", "flatten", "reduce", "emit", "track",
};

// $0..$3 are identifier slots, #0..#2 literal slots.
inline constexpr const char* kTemplates[] = {
    "val $0 = $1 + #0",
    "var $0 = #0\nwhile ($0 < #1) {\n  $0 += 1\n}",
    "if ($0 > #0) {\n  $1 = $1 + $0\n} else {\n  $1 = $1 - #1\n}",
    "for ($2 <- 0 until $0) {\n  $1 += $2 * #0\n}",
    "val $0 = List(#0, #1, #2).map(x => x * $1)",
    "$0 match {\n  case #0 => $1 += 1\n  case _ => $1 -= 1\n}",
    "println(\"$0 is \" + $1)",
    "val $0 = $1.filter(_ > #0).sum",
    "try {\n  $0 = $1 / #0\n} catch {\n  case e: ArithmeticException => $0 = 0\n}",
    "$0.foreach { $2 =>\n  $1 += $2\n}",
    "val $0 = if ($1 % 2 == 0) \"even\" else \"odd\"",
    "$0 = math.max($0, $1 * #0)",
    "val $0 = $1.zipWithIndex.collect { case ($2, i) if i > #0 => $2 * i }",
    "if ($0.isEmpty) {\n  return #0\n}",
    "$0 = $0.updated(#0, $1)",
    "val $0: Map[String, Int] = Map(\"a\" -> #0, \"b\" -> #1)",
    "$0 += $1.length * #0",
    "do {\n  $0 -= #0\n} while ($0 > #1)",
};

inline constexpr std::size_t kTemplateCount = sizeof(kTemplates) / sizeof(kTemplates[0]);

struct Stmt {
    std::size_t tmpl = 0;
    int slots[4] = {0, 0, 0, 0};  // indices into the method's variable list
    int lits[3] = {0, 0, 0};
};

struct MethodShape {
    std::string name;
    std::vector<std::string> vars;  // vars[0], vars[1] are the parameters
    std::vector<Stmt> stmts;
};

inline std::string pick_word(std::mt19937_64& rng) {
    return kWords[uniform_below(rng, std::size(kWords))];
}

inline std::string capitalize(std::string s) {
    if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

inline std::string fresh_identifier(std::mt19937_64& rng) {
    std::string id = pick_word(rng);
    if (uniform_below(rng, 2) == 0) id += capitalize(pick_word(rng));
    return id;
}

inline std::string method_name(std::mt19937_64& rng, std::size_t serial) {
    return std::string(kVerbs[uniform_below(rng, std::size(kVerbs))]) + capitalize(pick_word(rng)) +
           std::to_string(serial);
}

inline MethodShape random_shape(std::mt19937_64& rng, std::size_t serial) {
    MethodShape m;
    m.name = method_name(rng, serial);
    const auto nvars = 4 + uniform_below(rng, 4);
    while (m.vars.size() < nvars) {
        auto v = fresh_identifier(rng);
        if (std::find(m.vars.begin(), m.vars.end(), v) == m.vars.end()) m.vars.push_back(v);
    }
    const auto nstmts = 8 + uniform_below(rng, 8);
    for (std::size_t i = 0; i < nstmts; ++i) {
        Stmt s;
        s.tmpl = uniform_below(rng, kTemplateCount);
        for (int& v : s.slots) v = static_cast<int>(uniform_below(rng, m.vars.size()));
        for (int& l : s.lits) l = static_cast<int>(uniform_below(rng, 100));
        m.stmts.push_back(s);
    }
    return m;
}

inline std::string fill(const Stmt& s, const MethodShape& m) {
    std::string out;
    const std::string t = kTemplates[s.tmpl];
    for (std::size_t i = 0; i < t.size(); ++i) {
        if ((t[i] == '$' || t[i] == '#') && i + 1 < t.size() && t[i + 1] >= '0' && t[i + 1] <= '3') {
            const int k = t[i + 1] - '0';
            out += t[i] == '$' ? m.vars[static_cast<std::size_t>(s.slots[k])] : std::to_string(s.lits[k]);
            ++i;
        } else {
            out += t[i];
        }
    }
    return out;
}

/// Method source indented by `indent` spaces.
inline std::string render(const MethodShape& m, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    std::string out = pad + "def " + m.name + "(" + m.vars[0] + ": Int, " + m.vars[1] + ": Seq[Int]): Int = {\n";
    for (const auto& s : m.stmts) {
        std::string text = fill(s, m);
        std::size_t start = 0;
        while (start <= text.size()) {
            auto nl = text.find('\n', start);
            if (nl == std::string::npos) nl = text.size();
            out += pad + "  " + text.substr(start, nl - start) + "\n";
            start = nl + 1;
        }
    }
    out += pad + "  " + m.vars[0] + " + " + m.vars[1] + ".size\n";
    out += pad + "}\n";
    return out;
}

inline MethodShape type2_variant(const MethodShape& m, std::mt19937_64& rng, std::size_t serial) {
    MethodShape c = m;
    c.name = method_name(rng, serial);
    for (auto& v : c.vars) v = v + "X" + std::to_string(uniform_below(rng, 10));
    for (auto& s : c.stmts) {
        for (int& l : s.lits) l = static_cast<int>(uniform_below(rng, 100));
    }
    return c;
}

inline MethodShape type3_variant(const MethodShape& m, std::mt19937_64& rng, std::size_t serial) {
    MethodShape c = m;
    c.name = method_name(rng, serial);
    const auto pos = uniform_below(rng, c.stmts.size());
    if (uniform_below(rng, 2) == 0 && c.stmts.size() > 8) {
        c.stmts.erase(c.stmts.begin() + static_cast<std::ptrdiff_t>(pos));
    } else {
        Stmt s;
        s.tmpl = uniform_below(rng, kTemplateCount);
        for (int& v : s.slots) v = static_cast<int>(uniform_below(rng, c.vars.size()));
        for (int& l : s.lits) l = static_cast<int>(uniform_below(rng, 100));
        c.stmts.insert(c.stmts.begin() + static_cast<std::ptrdiff_t>(pos), s);
    }
    return c;
}

}  // namespace detail

/// A Type-1 rewrite of Scala source: comments inserted, blank lines added,
/// indentation and inter-token spacing changed. String and character
/// literals are left intact, so normalization maps the result back to the
/// input's normalized form.
inline std::string type1_mutation(const std::string& source, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::string out;
    bool in_string = false;
    bool triple = false;
    bool line_start = true;
    for (std::size_t i = 0; i < source.size(); ++i) {
        const char c = source[i];
        if (line_start && !in_string) {
            const auto roll = uniform_below(rng, 10);
            if (roll == 0) out += "  // " + detail::pick_word(rng) + " note\n";
            if (roll == 1) out += "\n";
            if (roll == 2) out += "    ";
            if (roll == 3) out += "\t";
            line_start = false;
        }
        if (c == '"' && !in_string) {
            in_string = true;
            triple = source.compare(i, 3, "\"\"\"") == 0;
            out += triple ? "\"\"\"" : "\"";
            if (triple) i += 2;
            continue;
        }
        if (in_string) {
            if (!triple && c == '\\' && i + 1 < source.size()) {
                out += c;
                out += source[++i];
                continue;
            }
            if (c == '"' && (!triple || source.compare(i, 3, "\"\"\"") == 0)) {
                out += triple ? "\"\"\"" : "\"";
                if (triple) i += 2;
                in_string = false;
                continue;
            }
            out += c;
            if (c == '\n') line_start = true;
            continue;
        }
        if (c == '\'' && i + 2 < source.size() && (source[i + 2] == '\'' || source[i + 1] == '\\')) {
            // Character literal: copy through the closing quote.
            const auto close = source.find('\'', i + 2);
            if (close != std::string::npos && close - i <= 8) {
                out.append(source, i, close - i + 1);
                i = close;
                continue;
            }
        }
        if (c == '/' && i + 1 < source.size() && (source[i + 1] == '/' || source[i + 1] == '*')) {
            // Existing comments pass through untouched.
            const bool line_comment = source[i + 1] == '/';
            const auto end = line_comment ? source.find('\n', i) : source.find("*/", i + 2);
            const auto stop = end == std::string::npos ? source.size() : (line_comment ? end : end + 2);
            out.append(source, i, stop - i);
            i = stop - 1;
            continue;
        }
        if (c == ' ' && uniform_below(rng, 4) == 0) {
            out += uniform_below(rng, 2) == 0 ? "   " : " /* ws */ ";
            continue;
        }
        if (c == '\n') {
            if (uniform_below(rng, 6) == 0) out += "   // trailing";
            out += c;
            line_start = true;
            continue;
        }
        out += c;
    }
    return out;
}

/// Bare method sources, one per entry, each at least 10 effective lines.
inline std::vector<std::string> method_sources(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(detail::render(detail::random_shape(rng, i), 0));
    return out;
}

inline Corpus generate(const Config& cfg) {
    std::mt19937_64 rng(cfg.seed);
    Corpus corpus;
    std::vector<detail::MethodShape> shapes;
    std::vector<std::string> shape_file;
    shapes.reserve(cfg.methods);

    const std::size_t projects = std::max<std::size_t>(cfg.projects, 1);
    const std::size_t per_file = std::max<std::size_t>(cfg.methods_per_file, 1);
    std::size_t serial = 0;
    std::size_t file_no = 0;
    while (serial < cfg.methods) {
        const auto project = file_no % projects;
        const std::string object = "Module" + std::to_string(file_no);
        const std::string path = "project" + std::to_string(project) + "/src/main/scala/" + object + ".scala";
        std::string content = "package project" + std::to_string(project) + "\n\n// Generated module.\nobject " +
                              object + " {\n";
        const auto count = std::min(per_file, cfg.methods - serial);
        for (std::size_t k = 0; k < count; ++k, ++serial) {
            detail::MethodShape shape;
            const bool clone = !shapes.empty() && unit_uniform(rng) < cfg.clone_rate;
            if (clone) {
                const auto src = uniform_below(rng, shapes.size());
                const auto kind = static_cast<CloneKind>(uniform_below(rng, 3));
                std::string text;
                if (kind == CloneKind::Type1) {
                    shape = shapes[src];
                    text = type1_mutation(detail::render(shape, 2), rng());
                } else {
                    shape = kind == CloneKind::Type2 ? detail::type2_variant(shapes[src], rng, serial)
                                                     : detail::type3_variant(shapes[src], rng, serial);
                    text = detail::render(shape, 2);
                }
                corpus.clones.push_back({shape_file[src], shapes[src].name, path, shape.name, kind});
                content += "\n" + text;
            } else {
                shape = detail::random_shape(rng, serial);
                content += "\n" + detail::render(shape, 2);
            }
            shapes.push_back(std::move(shape));
            shape_file.push_back(path);
        }
        content += "}\n";
        corpus.files.push_back({path, content, count_loc(content)});
        ++file_no;
    }
    std::sort(corpus.files.begin(), corpus.files.end(),
              [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
    corpus.methods = serial;
    return corpus;
}

inline void write_corpus(const Corpus& corpus, const std::filesystem::path& root) {
    for (const auto& f : corpus.files) write_text(root / f.path, f.content);
}

}  // namespace clonescope::synth
