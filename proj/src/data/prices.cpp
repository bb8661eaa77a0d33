#include "pmcvol/data/prices.hpp"

#include "pmcvol/errors.hpp"
#include "pmcvol/io/number_format.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace pmcvol::data {

namespace {

int digits(std::string_view s, std::size_t pos, std::size_t count) {
    if (pos + count > s.size()) {
        throw InvalidInput("truncated timestamp '" + std::string(s) + "'");
    }
    int v = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        if (s[i] < '0' || s[i] > '9') {
            throw InvalidInput("bad timestamp '" + std::string(s) + "'");
        }
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

void expect(std::string_view s, std::size_t pos, char c) {
    if (pos >= s.size() || s[pos] != c) {
        throw InvalidInput("bad timestamp '" + std::string(s) + "'");
    }
}

std::int64_t parse_iso8601(std::string_view s) {
    using namespace std::chrono;
    const int y = digits(s, 0, 4);
    expect(s, 4, '-');
    const int mo = digits(s, 5, 2);
    expect(s, 7, '-');
    const int d = digits(s, 8, 2);
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw InvalidInput("invalid calendar date '" + std::string(s) + "'");
    }
    std::int64_t seconds = sys_days{ymd}.time_since_epoch().count() * 86400LL;
    std::size_t pos = 10;
    if (pos < s.size()) {
        if (s[pos] != 'T' && s[pos] != ' ') {
            throw InvalidInput("bad timestamp '" + std::string(s) + "'");
        }
        const int hh = digits(s, pos + 1, 2);
        expect(s, pos + 3, ':');
        const int mm = digits(s, pos + 4, 2);
        int ss = 0;
        pos += 6;
        if (pos < s.size() && s[pos] == ':') {
            ss = digits(s, pos + 1, 2);
            pos += 3;
            if (pos < s.size() && s[pos] == '.') {
                ++pos;
                while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
                    ++pos;
                }
            }
        }
        if (hh > 23 || mm > 59 || ss > 60) {
            throw InvalidInput("invalid time of day '" + std::string(s) + "'");
        }
        seconds += hh * 3600LL + mm * 60LL + ss;
        if (pos < s.size()) {
            if (s[pos] == 'Z' && pos + 1 == s.size()) {
                pos += 1;
            } else if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size()) {
                const int sign = s[pos] == '+' ? 1 : -1;
                const int oh = digits(s, pos + 1, 2);
                expect(s, pos + 3, ':');
                const int om = digits(s, pos + 4, 2);
                seconds -= sign * (oh * 3600LL + om * 60LL);
                pos += 6;
            }
        }
        if (pos != s.size()) {
            throw InvalidInput("bad timestamp '" + std::string(s) + "'");
        }
    }
    return seconds;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

}  // namespace

std::int64_t parse_timestamp(std::string_view text) {
    text = io::trim(text);
    if (text.empty()) {
        throw InvalidInput("empty timestamp");
    }
    const bool looks_iso = text.size() >= 10 && text[4] == '-' && text[7] == '-';
    if (looks_iso) {
        return floor_div(parse_iso8601(text), 60);
    }
    const auto dot = text.find('.');
    const auto whole = text.substr(0, dot);
    if (dot != std::string_view::npos) {
        (void)io::parse_integer(text.substr(dot + 1));
    }
    return floor_div(io::parse_integer(whole), 60);
}

PriceLoadResult read_price_csv(std::istream& in) {
    PriceLoadResult result;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = io::trim(line);
        if (row.empty()) {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            if (row != "timestamp,open") {
                throw InvalidInput("line " + std::to_string(line_no) +
                                   ": expected header 'timestamp,open'");
            }
            continue;
        }
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
            throw InvalidInput("line " + std::to_string(line_no) + ": expected two fields");
        }
        PricePoint p;
        try {
            p.timestamp = parse_timestamp(row.substr(0, comma));
            p.open = io::parse_double(row.substr(comma + 1));
        } catch (const InvalidInput& e) {
            throw InvalidInput("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!(p.open > 0.0) || !std::isfinite(p.open)) {
            throw InvalidInput("line " + std::to_string(line_no) + ": open price must be positive");
        }
        if (!result.prices.empty() && p.timestamp <= result.prices.back().timestamp) {
            throw InvalidInput("line " + std::to_string(line_no) +
                               ": timestamps must be strictly increasing");
        }
        result.prices.push_back(p);
    }
    if (!header_seen) {
        throw InvalidInput("empty price file");
    }
    result.gap_warnings = count_gaps(result.prices);
    return result;
}

PriceLoadResult read_price_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open price file " + path.string());
    }
    return read_price_csv(in);
}

std::size_t count_gaps(const PriceSeries& prices) {
    std::size_t gaps = 0;
    for (std::size_t i = 1; i < prices.size(); ++i) {
        if (prices[i].timestamp - prices[i - 1].timestamp > 1) {
            ++gaps;
        }
    }
    return gaps;
}

void write_price_csv(std::ostream& out, const PriceSeries& prices) {
    out << "timestamp,open\n";
    for (const auto& p : prices) {
        out << p.timestamp * 60 << ',' << io::format_double(p.open) << '\n';
    }
}

std::vector<double> open_prices(const PriceSeries& prices) {
    std::vector<double> out;
    out.reserve(prices.size());
    for (const auto& p : prices) {
        out.push_back(p.open);
    }
    return out;
}

}  // namespace pmcvol::data
