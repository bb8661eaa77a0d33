#include "pmcvol/synth/regime_garch.hpp"

#include "pmcvol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace pmcvol::synth {

void RegimeSpec::validate() const {
    const std::size_t k = regimes.size();
    if (k == 0) {
        throw ConfigError("regime spec needs at least one regime");
    }
    for (std::size_t i = 0; i < k; ++i) {
        const auto& g = regimes[i];
        if (!(g.omega > 0.0) || !(g.alpha >= 0.0) || !(g.beta >= 0.0) || !(g.alpha + g.beta < 1.0)) {
            throw ConfigError("regime " + std::to_string(i) +
                              " violates omega > 0, alpha >= 0, beta >= 0, alpha + beta < 1");
        }
    }
    if (transition.size() != k * k) {
        throw ConfigError("transition matrix must be " + std::to_string(k) + " x " + std::to_string(k));
    }
    for (std::size_t i = 0; i < k; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double p = transition[i * k + j];
            if (!(p >= 0.0 && p <= 1.0)) {
                throw ConfigError("transition probabilities must lie in [0, 1]");
            }
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw ConfigError("transition row " + std::to_string(i) + " sums to " + std::to_string(total));
        }
    }
    if (initial_regime >= k) {
        throw ConfigError("initial regime out of range");
    }
    if (!(initial_price > 0.0)) {
        throw ConfigError("initial price must be positive");
    }
}

std::vector<double> RegimeSpec::stationary() const {
    validate();
    const std::size_t k = regimes.size();
    std::vector<double> pi(k, 1.0 / static_cast<double>(k));
    for (int iter = 0; iter < 100000; ++iter) {
        std::vector<double> next(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                next[j] += pi[i] * transition[i * k + j];
            }
        }
        double diff = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            diff = std::max(diff, std::abs(next[j] - pi[j]));
        }
        pi = std::move(next);
        if (diff < 1e-15) {
            break;
        }
    }
    return pi;
}

double unconditional_variance(const models::GarchParams& p) { return p.omega / (1.0 - p.alpha - p.beta); }

SyntheticSeries generate(const RegimeSpec& spec, std::size_t hours, std::size_t minutes_per_hour) {
    spec.validate();
    if (hours == 0 || minutes_per_hour == 0) {
        throw ConfigError("hours and minutes per hour must be positive");
    }
    const std::size_t k = spec.n_regimes();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    SyntheticSeries out;
    out.regimes.reserve(hours);
    out.variances.reserve(hours);
    out.hourly_returns.reserve(hours);
    out.prices.reserve(hours * minutes_per_hour + 1);

    std::size_t regime = spec.initial_regime;
    double h = unconditional_variance(spec.regimes[regime]);
    double log_price = std::log(spec.initial_price);
    std::int64_t ts = spec.start_minute;
    out.prices.push_back({ts, spec.initial_price});
    const double minute_scale = 1.0 / std::sqrt(static_cast<double>(minutes_per_hour));
    for (std::size_t t = 0; t < hours; ++t) {
        if (t > 0) {
            const double u = uniform(rng);
            double cum = 0.0;
            std::size_t next = k - 1;
            for (std::size_t j = 0; j < k; ++j) {
                cum += spec.transition[regime * k + j];
                if (u < cum) {
                    next = j;
                    break;
                }
            }
            regime = next;
            const auto& g = spec.regimes[regime];
            const double r = out.hourly_returns.back();
            h = g.omega + g.alpha * r * r + g.beta * h;
        }
        out.regimes.push_back(regime);
        out.variances.push_back(h);
        const double sd = std::sqrt(h) * minute_scale;
        const double start = log_price;
        for (std::size_t m = 0; m < minutes_per_hour; ++m) {
            log_price += sd * normal(rng);
            out.prices.push_back({++ts, std::exp(log_price)});
        }
        out.hourly_returns.push_back(log_price - start);
    }
    return out;
}

RegimeSpec default_benchmark_spec(std::uint64_t seed) {
    RegimeSpec spec;
    spec.regimes = {{1e-6, 0.05, 0.90}, {5e-6, 0.15, 0.80}};
    spec.transition = {0.98, 0.02, 0.02, 0.98};
    spec.seed = seed;
    spec.initial_regime = 0;
    return spec;
}

}  // namespace pmcvol::synth
