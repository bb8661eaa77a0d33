#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace pmcvol::data {

/// One 1-minute open price. Timestamps are epoch minutes.
struct PricePoint {
    std::int64_t timestamp = 0;
    double open = 0.0;
};

using PriceSeries = std::vector<PricePoint>;

struct PriceLoadResult {
    PriceSeries prices;
    /// Number of consecutive rows more than one minute apart.
    std::size_t gap_warnings = 0;
};

/// Parse a `timestamp` field: epoch seconds or ISO-8601 (`YYYY-MM-DD[T ]HH:MM[:SS][Z]`).
/// Returns epoch minutes. Throws InvalidInput on anything else.
std::int64_t parse_timestamp(std::string_view text);

/// Reads a `timestamp,open` CSV. Rows must be strictly ascending and prices positive;
/// violations throw InvalidInput naming the 1-based line number.
PriceLoadResult read_price_csv(std::istream& in);
PriceLoadResult read_price_csv(const std::filesystem::path& path);

/// Counts timestamp steps larger than one minute.
std::size_t count_gaps(const PriceSeries& prices);

/// Writes `timestamp,open` with epoch-second timestamps and round-trip precision.
void write_price_csv(std::ostream& out, const PriceSeries& prices);

std::vector<double> open_prices(const PriceSeries& prices);

}  // namespace pmcvol::data
