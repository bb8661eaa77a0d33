#include "pmcvol/data/returns.hpp"

#include "pmcvol/errors.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace pmcvol::data {

namespace {

void check_prices(std::span<const double> opens) {
    if (opens.size() < 2) {
        throw InvalidInput("log_returns needs at least two prices");
    }
    for (std::size_t i = 0; i < opens.size(); ++i) {
        if (!(opens[i] > 0.0) || !std::isfinite(opens[i])) {
            throw InvalidInput("nonpositive price at index " + std::to_string(i));
        }
    }
}

void check_window(std::size_t window, std::size_t available, const char* what) {
    if (window == 0) {
        throw InvalidInput(std::string(what) + ": window must be positive");
    }
    if (window > available) {
        throw InvalidInput(std::string(what) + ": window " + std::to_string(window) +
                           " exceeds series length " + std::to_string(available));
    }
}

double window_rms(std::span<const double> returns, std::size_t begin, std::size_t window) {
    double acc = 0.0;
    for (std::size_t i = begin; i < begin + window; ++i) {
        acc += returns[i] * returns[i];
    }
    return std::sqrt(acc / static_cast<double>(window));
}

}  // namespace

ReturnSeries log_returns(std::span<const double> opens) {
    check_prices(opens);
    const auto n = static_cast<std::int64_t>(opens.size()) - 1;
    ReturnSeries out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        out[i] = std::log(opens[i + 1] / opens[i]);
    }
    return out;
}

std::vector<double> historic_volatility(std::span<const double> returns, std::size_t window) {
    check_window(window, returns.size(), "historic_volatility");
    const auto count = static_cast<std::int64_t>(returns.size() / window);
    std::vector<double> out(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < count; ++t) {
        out[t] = window_rms(returns, static_cast<std::size_t>(t) * window, window);
    }
    return out;
}

std::vector<double> window_log_return(std::span<const double> opens, std::size_t window) {
    check_prices(opens);
    check_window(window, opens.size() - 1, "window_log_return");
    const auto count = static_cast<std::int64_t>((opens.size() - 1) / window);
    std::vector<double> out(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < count; ++t) {
        const auto w = static_cast<std::size_t>(t) * window;
        out[t] = std::log(opens[w + window] / opens[w]);
    }
    return out;
}

namespace serial {

ReturnSeries log_returns(std::span<const double> opens) {
    check_prices(opens);
    ReturnSeries out;
    out.reserve(opens.size() - 1);
    for (std::size_t i = 0; i + 1 < opens.size(); ++i) {
        out.push_back(std::log(opens[i + 1] / opens[i]));
    }
    return out;
}

std::vector<double> historic_volatility(std::span<const double> returns, std::size_t window) {
    check_window(window, returns.size(), "historic_volatility");
    std::vector<double> out;
    for (std::size_t begin = 0; begin + window <= returns.size(); begin += window) {
        out.push_back(window_rms(returns, begin, window));
    }
    return out;
}

std::vector<double> window_log_return(std::span<const double> opens, std::size_t window) {
    check_prices(opens);
    check_window(window, opens.size() - 1, "window_log_return");
    std::vector<double> out;
    for (std::size_t w = 0; w + window < opens.size(); w += window) {
        out.push_back(std::log(opens[w + window] / opens[w]));
    }
    return out;
}

}  // namespace serial

}  // namespace pmcvol::data
