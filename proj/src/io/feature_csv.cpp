#include "pmcvol/io/feature_csv.hpp"

#include "pmcvol/errors.hpp"
#include "pmcvol/io/number_format.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace pmcvol::io {

namespace {

constexpr std::string_view kHeader = "index,sigma2,u60sq,sigma2_norm,u60sq_norm";

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) {
            return out;
        }
        start = comma + 1;
    }
}

}  // namespace

void write_features_csv(std::ostream& out, const data::FeatureSeries& series) {
    const bool norm = series.normalized.size() == series.size();
    out << kHeader << '\n';
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series.samples[i];
        out << i << ',' << format_double(s.sigma2) << ',' << format_double(s.u60sq) << ',';
        if (norm) {
            out << format_double(series.normalized[i].sigma2) << ',' << format_double(series.normalized[i].u2);
        } else {
            out << ',';
        }
        out << '\n';
    }
}

std::vector<data::VolatilitySample> read_features_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != kHeader) {
        throw InvalidInput("line 1: expected header '" + std::string(kHeader) + "'");
    }
    std::vector<data::VolatilitySample> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (fields.size() != 5) {
            throw InvalidInput(where + "expected 5 fields, found " + std::to_string(fields.size()));
        }
        try {
            if (parse_integer(fields[0]) != static_cast<long long>(out.size())) {
                throw InvalidInput("index out of sequence");
            }
            const data::VolatilitySample s{parse_double(fields[1]), parse_double(fields[2])};
            if (!(s.sigma2 >= 0.0) || !(s.u60sq >= 0.0)) {
                throw InvalidInput("features must be nonnegative");
            }
            out.push_back(s);
        } catch (const InvalidInput& e) {
            throw InvalidInput(where + e.what());
        }
    }
    return out;
}

std::vector<data::VolatilitySample> read_features_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open feature file " + path.string());
    }
    return read_features_csv(in);
}

void write_trajectory_csv(std::ostream& out, std::span<const double> predictions,
                          const std::vector<std::vector<double>>& posteriors) {
    if (posteriors.size() != predictions.size() || posteriors.empty()) {
        throw InvalidInput("trajectory needs one posterior per prediction");
    }
    const std::size_t n = posteriors.front().size();
    out << "t,pred";
    for (std::size_t x = 0; x < n; ++x) {
        out << ",state" << x;
    }
    out << ",argmax\n";
    for (std::size_t t = 0; t < predictions.size(); ++t) {
        const auto& p = posteriors[t];
        out << t << ',' << format_double(predictions[t]);
        for (double v : p) {
            out << ',' << format_double(v);
        }
        out << ',' << (std::max_element(p.begin(), p.end()) - p.begin()) << '\n';
    }
}

}  // namespace pmcvol::io
