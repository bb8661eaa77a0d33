#pragma once

#include "pmcvol/data/features.hpp"
#include "pmcvol/train/metrics.hpp"
#include "pmcvol/train/trainer.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pmcvol::train {

/// Test-split scores of one trained model.
struct TestScore {
    double mse_normalized = 0.0;
    double mse_original = 0.0;
    std::size_t n_targets = 0;
    std::vector<double> predictions;  // normalized scale, one per test target
};

/// Filters the whole normalized series (so the posterior is warm at the test start) and
/// scores every prediction whose target index lies in the test split, on both scales.
/// Original-scale predictions are the inverted normalization of normalized predictions.
TestScore evaluate_test(const Forecaster& model, const data::Dataset& dataset);

struct SeedRun {
    std::uint64_t seed = 0;
    TrainResult training;
    TestScore test;
};

struct ExperimentReport {
    ModelSpec spec;
    TrainConfig config;  // config.seed is the first seed; run i uses config.seed + i
    std::string instrument;
    std::vector<SeedRun> runs;
    ScoreSummary normalized;
    ScoreSummary original;

    [[nodiscard]] std::vector<double> normalized_scores() const;
    [[nodiscard]] std::vector<double> original_scores() const;
};

/// Trains and scores n_seeds independent models, fanned out over util::worker_count threads.
ExperimentReport run_experiment(const data::Dataset& dataset, const ModelSpec& spec, const TrainConfig& config,
                                std::size_t n_seeds, std::string instrument = {});

namespace serial {

/// Single-threaded reference; produces the same report as the parallel version.
ExperimentReport run_experiment(const data::Dataset& dataset, const ModelSpec& spec, const TrainConfig& config,
                                std::size_t n_seeds, std::string instrument = {});

}  // namespace serial

}  // namespace pmcvol::train
