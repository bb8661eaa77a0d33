#pragma once

#include <optional>
#include <span>

namespace pmcvol::train {

/// Mean of squared differences. Throws InvalidInput on empty or mismatched input.
double mse(std::span<const double> truth, std::span<const double> pred);

/// Mean and Gaussian 95% half-width 1.96 * sd / sqrt(n) of per-seed scores,
/// with sd the sample standard deviation. The half-width is absent when n < 2.
struct ScoreSummary {
    double mean = 0.0;
    double sd = 0.0;
    std::optional<double> ci_half_width;
    double min = 0.0;
    double max = 0.0;
};

ScoreSummary summarize(std::span<const double> values);

inline constexpr double kGaussian95 = 1.96;

}  // namespace pmcvol::train
