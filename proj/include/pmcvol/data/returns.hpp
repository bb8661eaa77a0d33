#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pmcvol::data {

/// 1-minute log-returns; length is one less than the price series.
using ReturnSeries = std::vector<double>;

inline constexpr std::size_t kDefaultWindow = 60;

// OpenMP kernels. Each output element is computed in a fixed serial order, so
// results are bitwise identical to the `serial` reference for any thread count.

/// values[i] = ln(open[i+1] / open[i]). Throws InvalidInput naming the first
/// nonpositive price, or when fewer than two prices are given.
ReturnSeries log_returns(std::span<const double> opens);

/// out[t] = sqrt(mean of u^2 over [window*t, window*(t+1))), floor(len/window) entries.
std::vector<double> historic_volatility(std::span<const double> returns,
                                        std::size_t window = kDefaultWindow);

/// out[t] = ln(open[window*(t+1)] / open[window*t]), floor((len-1)/window) entries.
std::vector<double> window_log_return(std::span<const double> opens,
                                      std::size_t window = kDefaultWindow);

namespace serial {

ReturnSeries log_returns(std::span<const double> opens);
std::vector<double> historic_volatility(std::span<const double> returns,
                                        std::size_t window = kDefaultWindow);
std::vector<double> window_log_return(std::span<const double> opens,
                                      std::size_t window = kDefaultWindow);

}  // namespace serial

}  // namespace pmcvol::data
