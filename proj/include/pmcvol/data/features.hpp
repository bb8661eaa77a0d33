#pragma once

#include "pmcvol/data/prices.hpp"
#include "pmcvol/data/returns.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pmcvol::data {

/// Raw hourly features: historic volatility and the squared windowed log-return.
struct VolatilitySample {
    double sigma2 = 0.0;
    double u60sq = 0.0;
};

/// One model input y_t on the normalized scale.
struct FeaturePair {
    double sigma2 = 0.0;
    double u2 = 0.0;
};

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    [[nodiscard]] std::size_t size() const { return end - begin; }
    [[nodiscard]] bool empty() const { return end <= begin; }
};

struct ChannelNorm {
    double mean = 0.0;
    double scale = 1.0;
};

/// v' = (ln max(v, floor) - mean) / scale, per channel.
struct NormalizationParams {
    ChannelNorm sigma2;
    ChannelNorm u60sq;
    bool log_transform = true;
    double floor = 1e-12;
    IndexRange fit;

    [[nodiscard]] FeaturePair apply(const VolatilitySample& s) const;
    [[nodiscard]] VolatilitySample invert(const FeaturePair& p) const;
    [[nodiscard]] double invert_sigma2(double normalized) const;
};

struct FeatureSeries {
    std::vector<VolatilitySample> samples;
    std::optional<NormalizationParams> norm;
    /// Filled by normalize(); empty otherwise.
    std::vector<FeaturePair> normalized;

    [[nodiscard]] std::size_t size() const { return samples.size(); }
};

/// Raw features from 1-minute open prices: floor((len-1)/window) hourly samples.
FeatureSeries make_features(std::span<const double> opens, std::size_t window = kDefaultWindow);

/// Fits per-channel log statistics on `fit_segment` (population variance) and applies
/// them to the whole series. Throws DegenerateData when a channel is constant there.
FeatureSeries normalize(const FeatureSeries& series, IndexRange fit_segment);

/// Inverts normalization of every sample. Requires a normalized series.
std::vector<VolatilitySample> denormalize(const FeatureSeries& series);

struct SplitSpec {
    double train_frac = 0.4;
    double val_frac = 0.4;
    double test_frac = 0.2;

    /// Throws ConfigError unless each fraction is in (0,1) and they sum to 1.
    void validate() const;
};

struct SplitBounds {
    IndexRange train;
    IndexRange val;
    IndexRange test;
};

/// Contiguous chronological bounds: floor(train*T), floor(val*T), remainder.
SplitBounds split_bounds(std::size_t length, const SplitSpec& spec);

struct FeatureSplits {
    FeatureSeries train;
    FeatureSeries val;
    FeatureSeries test;
};

FeatureSplits split(const FeatureSeries& series, const SplitSpec& spec);

FeatureSeries slice(const FeatureSeries& series, IndexRange range);

/// A featurized instrument ready for training: normalization fit on the train split.
struct Dataset {
    FeatureSeries features;
    SplitSpec split_spec;
    SplitBounds bounds;
    std::size_t window = kDefaultWindow;
};

Dataset build_dataset(std::span<const double> opens, std::size_t window = kDefaultWindow,
                      const SplitSpec& spec = {});

/// Same as build_dataset, starting from already computed raw features.
Dataset dataset_from_samples(std::vector<VolatilitySample> samples, std::size_t window = kDefaultWindow,
                             const SplitSpec& spec = {});

}  // namespace pmcvol::data
