#pragma once

#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "clonescope/detector.hpp"
#include "clonescope/evaluator.hpp"

namespace clonescope {

struct ReportInput {
    std::string title = "Clone detection evaluation";
    std::map<DetectorTag, ConfusionMatrix> matrices;
    std::optional<TypeDistribution> distribution;
    std::vector<TimingRun> timing;
};

namespace detail {

inline std::string pct_cell(const std::optional<double>& v) {
    if (!v) return "n/a";
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << ratio_percent_1dp(*v) << '%';
    return os.str();
}

}  // namespace detail

inline std::string markdown_report(const ReportInput& in) {
    std::ostringstream os;
    os << "# " << in.title << "\n\n";

    if (!in.matrices.empty()) {
        os << "## Confusion matrices\n\n"
           << "Rows are the detector verdict, columns the consensus label.\n\n"
           << "| Detector | Verdict | Clone | Not clone |\n|---|---|---:|---:|\n";
        for (const auto& [tag, m] : in.matrices) {
            os << "| " << to_string(tag) << " | Clone | " << m.tp << " | " << m.fp << " |\n";
            os << "| | Not clone | " << m.fn << " | " << m.tn << " |\n";
        }
        os << "\n## Precision and recall\n\n| Detector | Precision | Recall | Unlabeled predictions |\n"
           << "|---|---:|---:|---:|\n";
        for (const auto& [tag, m] : in.matrices) {
            const auto pr = precision_recall(m);
            os << "| " << to_string(tag) << " | " << detail::pct_cell(pr.precision) << " | "
               << detail::pct_cell(pr.recall) << " | " << m.unlabeled << " |\n";
        }
        os << '\n';
    }

    if (in.distribution) {
        const auto& d = *in.distribution;
        os << "## Clone type distribution\n\n| Label | Count | Share |\n|---|---:|---:|\n";
        for (auto l : kAllLabels) {
            const auto i = static_cast<std::size_t>(l);
            os << "| " << to_string(l) << " | " << d.counts[i] << " | " << std::fixed << std::setprecision(1)
               << d.percent[i] << "% |\n";
        }
        os << "| Total | " << d.total << " | |\n\n";
    }

    if (!in.timing.empty()) {
        os << "## Execution time\n\n| Corpus | Detector | LoC | Methods | Seconds |\n|---|---|---:|---:|---:|\n";
        for (const auto& r : in.timing) {
            os << "| " << r.corpus << " | " << r.detector << " | " << r.loc << " | " << r.method_count << " | "
               << std::fixed << std::setprecision(3) << r.seconds << " |\n";
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace clonescope
