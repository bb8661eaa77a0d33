#pragma once

#include "pmcvol/data/prices.hpp"
#include "pmcvol/models/base_model.hpp"

#include <cstdint>
#include <vector>

namespace pmcvol::synth {

/// Markov-switching GARCH(1,1) on hourly returns with Gaussian innovations.
struct RegimeSpec {
    std::vector<models::GarchParams> regimes;
    /// K x K row-major, row k = p(next regime | regime k).
    std::vector<double> transition;
    std::uint64_t seed = 0;
    std::size_t initial_regime = 0;
    double initial_price = 100.0;
    /// Timestamp of the first price, in minutes since the Unix epoch.
    std::int64_t start_minute = 0;

    [[nodiscard]] std::size_t n_regimes() const { return regimes.size(); }

    /// Throws ConfigError unless omega > 0, alpha >= 0, beta >= 0, alpha + beta < 1 per regime,
    /// transition rows sum to 1 within 1e-9, and the initial regime exists.
    void validate() const;

    /// Stationary law of the regime chain by power iteration from the uniform law
    /// (for a reducible chain this is the limit reached from uniform).
    [[nodiscard]] std::vector<double> stationary() const;
};

/// omega / (1 - alpha - beta).
double unconditional_variance(const models::GarchParams& p);

struct SyntheticSeries {
    /// hours * minutes_per_hour + 1 minute prices.
    data::PriceSeries prices;
    /// Active regime of each hour.
    std::vector<std::size_t> regimes;
    /// Conditional variance of each hourly return.
    std::vector<double> variances;
    /// Realized hourly log-returns.
    std::vector<double> hourly_returns;
};

/// h_1 is the initial regime's unconditional variance; h_{t+1} = omega + alpha r_t^2 + beta h_t
/// under the regime active in hour t+1. Each hour's minute returns are i.i.d. N(0, h_t / minutes).
/// Deterministic per seed.
SyntheticSeries generate(const RegimeSpec& spec, std::size_t hours, std::size_t minutes_per_hour = 60);

inline constexpr std::size_t kBenchmarkHours = 6000;

/// Two regimes, A = (1e-6, 0.05, 0.90) and B = (5e-6, 0.15, 0.80), switching with probability
/// 0.02 per hour, starting in A.
RegimeSpec default_benchmark_spec(std::uint64_t seed = 7);

}  // namespace pmcvol::synth
