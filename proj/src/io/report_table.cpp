#include "pmcvol/io/report_table.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace pmcvol::io {

namespace {

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

int block_rank(const std::string& block) {
    static const std::vector<std::string> order = {"garch", "fnn2", "fnn3", "fnn23", "hmc"};
    const auto it = std::find(order.begin(), order.end(), block);
    return static_cast<int>(it - order.begin());
}

void table(std::ostringstream& out, std::span<const ReportRow> rows, const std::vector<std::string>& instruments,
           const std::vector<std::string>& labels, bool original) {
    auto mean_of = [&](const ReportRow& r) { return original ? r.original_mean : r.normalized_mean; };
    std::map<std::pair<std::string, std::string>, double> best;  // (block, instrument) -> lowest mean
    for (const auto& r : rows) {
        const auto key = std::make_pair(r.block, r.instrument);
        const auto it = best.find(key);
        if (it == best.end() || mean_of(r) < it->second) {
            best[key] = mean_of(r);
        }
    }
    out << "| Model |";
    for (const auto& i : instruments) {
        out << ' ' << (i.empty() ? "data" : i) << " |";
    }
    out << "\n|---|";
    for (std::size_t i = 0; i < instruments.size(); ++i) {
        out << "---|";
    }
    out << '\n';
    for (const auto& label : labels) {
        out << "| " << label << " |";
        for (const auto& inst : instruments) {
            const auto it = std::find_if(rows.begin(), rows.end(),
                                         [&](const ReportRow& r) { return r.label == label && r.instrument == inst; });
            if (it == rows.end()) {
                out << " |";
                continue;
            }
            const double m = mean_of(*it);
            const auto ci = original ? it->original_ci : it->normalized_ci;
            const bool bold = m == best[{it->block, inst}];
            out << ' ' << (bold ? "**" + number(m) + "**" : number(m));
            if (ci) {
                out << " ± " << number(*ci);
            }
            out << " |";
        }
        out << '\n';
    }
}

}  // namespace

std::string markdown_tables(std::span<const ReportRow> rows) {
    std::vector<std::string> instruments;
    std::vector<std::pair<int, std::string>> labels;
    for (const auto& r : rows) {
        if (std::find(instruments.begin(), instruments.end(), r.instrument) == instruments.end()) {
            instruments.push_back(r.instrument);
        }
        const auto entry = std::make_pair(block_rank(r.block), r.label);
        if (std::find(labels.begin(), labels.end(), entry) == labels.end()) {
            labels.push_back(entry);
        }
    }
    std::stable_sort(labels.begin(), labels.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::string> ordered;
    for (const auto& l : labels) {
        ordered.push_back(l.second);
    }
    std::ostringstream out;
    out << "### Test MSE, normalized data\n\n";
    table(out, rows, instruments, ordered, false);
    out << "\n### Test MSE, original scale\n\n";
    table(out, rows, instruments, ordered, true);
    return out.str();
}

}  // namespace pmcvol::io
