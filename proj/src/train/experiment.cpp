#include "pmcvol/train/experiment.hpp"

#include "pmcvol/errors.hpp"
#include "pmcvol/util/parallel.hpp"

#include <exception>
#include <optional>

namespace pmcvol::train {

namespace {

std::span<const data::FeaturePair> segment(const data::Dataset& d, data::IndexRange r) {
    return std::span<const data::FeaturePair>(d.features.normalized).subspan(r.begin, r.size());
}

void check_dataset(const data::Dataset& dataset) {
    if (!dataset.features.norm || dataset.features.normalized.size() != dataset.features.size()) {
        throw InvalidInput("dataset is not normalized");
    }
}

SeedRun run_one(const data::Dataset& dataset, const ModelSpec& spec, const TrainConfig& config, std::size_t i) {
    TrainConfig c = config;
    c.seed = config.seed + i;
    auto trained = train(Forecaster::init(spec, c.seed), segment(dataset, dataset.bounds.train),
                         segment(dataset, dataset.bounds.val), c);
    TestScore score = evaluate_test(trained.model, dataset);
    return {c.seed, std::move(trained), std::move(score)};
}

ExperimentReport assemble(const ModelSpec& spec, const TrainConfig& config, std::string instrument,
                          std::vector<SeedRun> runs) {
    ExperimentReport r{spec, config, std::move(instrument), std::move(runs), {}, {}};
    r.normalized = summarize(r.normalized_scores());
    r.original = summarize(r.original_scores());
    return r;
}

void check_request(const data::Dataset& dataset, const ModelSpec& spec, const TrainConfig& config,
                   std::size_t n_seeds) {
    check_dataset(dataset);
    spec.validate();
    config.validate();
    if (n_seeds == 0) {
        throw ConfigError("at least one seed is required");
    }
}

}  // namespace

TestScore evaluate_test(const Forecaster& model, const data::Dataset& dataset) {
    check_dataset(dataset);
    const auto& test = dataset.bounds.test;
    if (test.empty() || test.begin == 0) {
        throw InvalidInput("test split must be nonempty and preceded by at least one sample");
    }
    const auto& norm = *dataset.features.norm;
    const auto ys = std::span<const data::FeaturePair>(dataset.features.normalized).first(test.end);
    const auto trace = model.filter(ys);

    TestScore s;
    s.n_targets = test.size();
    std::vector<double> truth_norm;
    std::vector<double> truth_raw;
    std::vector<double> pred_raw;
    for (std::size_t target = test.begin; target < test.end; ++target) {
        const double pred = trace.predictions[target - 1];
        s.predictions.push_back(pred);
        truth_norm.push_back(dataset.features.normalized[target].sigma2);
        truth_raw.push_back(dataset.features.samples[target].sigma2);
        pred_raw.push_back(norm.invert_sigma2(pred));
    }
    s.mse_normalized = mse(truth_norm, s.predictions);
    s.mse_original = mse(truth_raw, pred_raw);
    return s;
}

std::vector<double> ExperimentReport::normalized_scores() const {
    std::vector<double> v;
    for (const auto& r : runs) {
        v.push_back(r.test.mse_normalized);
    }
    return v;
}

std::vector<double> ExperimentReport::original_scores() const {
    std::vector<double> v;
    for (const auto& r : runs) {
        v.push_back(r.test.mse_original);
    }
    return v;
}

ExperimentReport run_experiment(const data::Dataset& dataset, const ModelSpec& spec, const TrainConfig& config,
                                std::size_t n_seeds, std::string instrument) {
    check_request(dataset, spec, config, n_seeds);
    std::vector<std::optional<SeedRun>> slots(n_seeds);
    std::vector<std::exception_ptr> errors(n_seeds);
    const int workers = util::worker_count(n_seeds);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (std::size_t i = 0; i < n_seeds; ++i) {
        try {
            slots[i].emplace(run_one(dataset, spec, config, i));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::vector<SeedRun> runs;
    runs.reserve(n_seeds);
    for (auto& s : slots) {
        runs.push_back(std::move(*s));
    }
    return assemble(spec, config, std::move(instrument), std::move(runs));
}

namespace serial {

ExperimentReport run_experiment(const data::Dataset& dataset, const ModelSpec& spec, const TrainConfig& config,
                                std::size_t n_seeds, std::string instrument) {
    check_request(dataset, spec, config, n_seeds);
    std::vector<SeedRun> runs;
    runs.reserve(n_seeds);
    for (std::size_t i = 0; i < n_seeds; ++i) {
        runs.push_back(run_one(dataset, spec, config, i));
    }
    return assemble(spec, config, std::move(instrument), std::move(runs));
}

}  // namespace serial

}  // namespace pmcvol::train
