#include "pmcvol/train/metrics.hpp"

#include "pmcvol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pmcvol::train {

double mse(std::span<const double> truth, std::span<const double> pred) {
    if (truth.size() != pred.size()) {
        throw InvalidInput("mse: " + std::to_string(truth.size()) + " targets but " +
                           std::to_string(pred.size()) + " predictions");
    }
    if (truth.empty()) {
        throw InvalidInput("mse: empty input");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = truth[i] - pred[i];
        acc += d * d;
    }
    return acc / static_cast<double>(truth.size());
}

ScoreSummary summarize(std::span<const double> values) {
    if (values.empty()) {
        throw InvalidInput("summarize: no values");
    }
    ScoreSummary s;
    const auto n = static_cast<double>(values.size());
    for (double v : values) {
        s.mean += v;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    // summation rounding can push the mean of near-equal values just outside [min, max]
    s.mean = std::clamp(s.mean / n, s.min, s.max);
    if (values.size() >= 2) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.sd = std::sqrt(ss / (n - 1.0));
        s.ci_half_width = kGaussian95 * s.sd / std::sqrt(n);
    }
    return s;
}

}  // namespace pmcvol::train
