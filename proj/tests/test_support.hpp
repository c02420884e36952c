#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace testing_support {

class TempDir {
public:
    TempDir() {
        std::string tmpl = (std::filesystem::temp_directory_path() / "clonescope-XXXXXX").string();
        if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
        path_ = tmpl;
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Shell {
    int status = 0;
    std::string out;
};

/// Runs a shell command and captures stdout.
inline Shell run(const std::string& cmd) {
    Shell r;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return {-1, {}};
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int st = ::pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

/// Random bags over a small vocabulary; roughly a third are near-copies of an
/// earlier bag so that pairs land on both sides of any threshold.
template <class Bag>
std::vector<Bag> random_bags(std::size_t n, std::uint64_t seed, std::size_t vocab = 40, std::size_t max_size = 60) {
    std::mt19937_64 rng(seed);
    auto below = [&](std::size_t k) { return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng); };
    std::vector<Bag> out;
    for (std::size_t i = 0; i < n; ++i) {
        Bag bag;
        bag.method_id = "m" + std::to_string(i);
        if (!out.empty() && below(3) == 0) {
            bag.entries = out[below(out.size())].entries;
            for (std::size_t e = below(4); e > 0; --e) {
                const auto tok = "t" + std::to_string(below(vocab));
                if (below(2) == 0) {
                    ++bag.entries[tok];
                } else if (auto it = bag.entries.find(tok); it != bag.entries.end() && bag.entries.size() > 1) {
                    if (--it->second == 0) bag.entries.erase(it);
                }
            }
        } else {
            for (std::size_t k = 1 + below(max_size); k > 0; --k) ++bag.entries["t" + std::to_string(below(vocab))];
        }
        for (const auto& [_, c] : bag.entries) bag.size += c;
        out.push_back(std::move(bag));
    }
    return out;
}

inline constexpr const char* kListing1 = R"(def secondElementIfArray(x: Any) = x match {
  case Array(_, a, _*) => a
  case _ => "default"
}

def nameIfDog(x: Any) = x match {
  case Dog(a) => a
  case _ => "default"
}
)";

}  // namespace testing_support
