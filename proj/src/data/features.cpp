#include "pmcvol/data/features.hpp"

#include "pmcvol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pmcvol::data {

namespace {

double to_log(double v, double floor) { return std::log(std::max(v, floor)); }

ChannelNorm fit_channel(const std::vector<double>& logs, const char* name) {
    const auto n = static_cast<double>(logs.size());
    double mean = 0.0;
    for (double v : logs) {
        mean += v;
    }
    mean /= n;
    double var = 0.0;
    for (double v : logs) {
        var += (v - mean) * (v - mean);
    }
    var /= n;
    const double scale = std::sqrt(var);
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw DegenerateData(std::string("normalize: channel '") + name +
                             "' has zero variance on the fit segment");
    }
    return {mean, scale};
}

}  // namespace

FeaturePair NormalizationParams::apply(const VolatilitySample& s) const {
    const double a = log_transform ? to_log(s.sigma2, floor) : s.sigma2;
    const double b = log_transform ? to_log(s.u60sq, floor) : s.u60sq;
    return {(a - sigma2.mean) / sigma2.scale, (b - u60sq.mean) / u60sq.scale};
}

VolatilitySample NormalizationParams::invert(const FeaturePair& p) const {
    const double a = p.sigma2 * sigma2.scale + sigma2.mean;
    const double b = p.u2 * u60sq.scale + u60sq.mean;
    return log_transform ? VolatilitySample{std::exp(a), std::exp(b)} : VolatilitySample{a, b};
}

double NormalizationParams::invert_sigma2(double normalized) const {
    const double a = normalized * sigma2.scale + sigma2.mean;
    return log_transform ? std::exp(a) : a;
}

FeatureSeries make_features(std::span<const double> opens, std::size_t window) {
    const auto returns = log_returns(opens);
    const auto vol = historic_volatility(returns, window);
    const auto wret = window_log_return(opens, window);
    FeatureSeries out;
    out.samples.reserve(vol.size());
    for (std::size_t t = 0; t < vol.size(); ++t) {
        out.samples.push_back({vol[t], wret[t] * wret[t]});
    }
    return out;
}

FeatureSeries normalize(const FeatureSeries& series, IndexRange fit_segment) {
    if (fit_segment.empty() || fit_segment.end > series.size()) {
        throw InvalidInput("normalize: fit segment must be a nonempty range inside the series");
    }
    NormalizationParams params;
    params.fit = fit_segment;
    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t t = fit_segment.begin; t < fit_segment.end; ++t) {
        a.push_back(to_log(series.samples[t].sigma2, params.floor));
        b.push_back(to_log(series.samples[t].u60sq, params.floor));
    }
    params.sigma2 = fit_channel(a, "sigma2");
    params.u60sq = fit_channel(b, "u60sq");

    FeatureSeries out;
    out.samples = series.samples;
    out.norm = params;
    out.normalized.reserve(series.size());
    for (const auto& s : series.samples) {
        out.normalized.push_back(params.apply(s));
    }
    return out;
}

std::vector<VolatilitySample> denormalize(const FeatureSeries& series) {
    if (!series.norm) {
        throw InvalidInput("denormalize: series carries no normalization parameters");
    }
    std::vector<VolatilitySample> out;
    out.reserve(series.normalized.size());
    for (const auto& p : series.normalized) {
        out.push_back(series.norm->invert(p));
    }
    return out;
}

void SplitSpec::validate() const {
    for (double f : {train_frac, val_frac, test_frac}) {
        if (!(f > 0.0 && f < 1.0)) {
            throw ConfigError("split fractions must lie in (0,1)");
        }
    }
    if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9) {
        throw ConfigError("split fractions must sum to 1");
    }
}

SplitBounds split_bounds(std::size_t length, const SplitSpec& spec) {
    spec.validate();
    if (length < 3) {
        throw InvalidInput("split needs at least 3 samples, got " + std::to_string(length));
    }
    const auto len = static_cast<double>(length);
    // the epsilon absorbs products like 0.4*10 landing a hair under an integer
    const auto n_train = static_cast<std::size_t>(std::floor(spec.train_frac * len + 1e-9));
    const auto n_val = static_cast<std::size_t>(std::floor(spec.val_frac * len + 1e-9));
    if (n_train == 0 || n_val == 0 || n_train + n_val >= length) {
        throw InvalidInput("series of length " + std::to_string(length) +
                           " is too short for the requested split");
    }
    return {{0, n_train}, {n_train, n_train + n_val}, {n_train + n_val, length}};
}

FeatureSeries slice(const FeatureSeries& series, IndexRange range) {
    FeatureSeries out;
    out.norm = series.norm;
    out.samples.assign(series.samples.begin() + static_cast<std::ptrdiff_t>(range.begin),
                       series.samples.begin() + static_cast<std::ptrdiff_t>(range.end));
    if (!series.normalized.empty()) {
        out.normalized.assign(series.normalized.begin() + static_cast<std::ptrdiff_t>(range.begin),
                              series.normalized.begin() + static_cast<std::ptrdiff_t>(range.end));
    }
    return out;
}

FeatureSplits split(const FeatureSeries& series, const SplitSpec& spec) {
    const auto b = split_bounds(series.size(), spec);
    return {slice(series, b.train), slice(series, b.val), slice(series, b.test)};
}

Dataset build_dataset(std::span<const double> opens, std::size_t window, const SplitSpec& spec) {
    Dataset ds;
    ds.window = window;
    ds.split_spec = spec;
    const auto raw = make_features(opens, window);
    ds.bounds = split_bounds(raw.size(), spec);
    ds.features = normalize(raw, ds.bounds.train);
    return ds;
}

Dataset dataset_from_samples(std::vector<VolatilitySample> samples, std::size_t window, const SplitSpec& spec) {
    Dataset ds;
    ds.window = window;
    ds.split_spec = spec;
    FeatureSeries raw;
    raw.samples = std::move(samples);
    ds.bounds = split_bounds(raw.size(), spec);
    ds.features = normalize(raw, ds.bounds.train);
    return ds;
}

}  // namespace pmcvol::data
