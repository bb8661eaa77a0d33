#pragma once

#include <string>
#include <string_view>

namespace pmcvol::io {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict full-field parse; throws InvalidInput on trailing junk or empty input.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace pmcvol::io
