#pragma once

#include "pmcvol/ad/tape.hpp"
#include "pmcvol/train/forecaster.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace pmcvol::train {

struct TrainConfig {
    std::size_t epochs = 300;
    double learning_rate = 0.05;
    std::uint64_t seed = 0;
    /// Epochs without a validation improvement before stopping.
    std::size_t patience = 50;

    /// Throws ConfigError unless epochs >= 1, 1 <= patience <= epochs and learning_rate > 0.
    void validate() const;
};

/// Training objective on the sigma2 channel: sum over t of (pred_t - sigma2_{t+1})^2.
template <class T>
T sequence_sse(const Forecaster& model, std::span<const T> flat, std::span<const FeaturePair> ys) {
    const auto trace = model.filter<T>(flat, ys);
    const auto& pred = trace.predictions;
    T acc = ad::square(pred[0] - ys[1].sigma2);
    for (std::size_t t = 1; t < pred.size(); ++t) {
        acc = acc + ad::square(pred[t] - ys[t + 1].sigma2);
    }
    return acc;
}

struct LossGradient {
    double sse = 0.0;
    std::size_t n_terms = 0;
    std::vector<double> gradient;

    [[nodiscard]] double mse() const { return sse / static_cast<double>(n_terms); }
};

/// Records the summed loss on `tape` (cleared first) and returns it with d sse / d flat.
LossGradient loss_and_gradient(const Forecaster& model, std::span<const double> flat,
                               std::span<const FeaturePair> ys, ad::Tape& tape);

/// MSE of one-step predictions over a segment filtered from the model's initial state.
double segment_mse(const Forecaster& model, std::span<const FeaturePair> ys);

struct TrainResult {
    Forecaster model;                // best-validation snapshot
    std::vector<double> train_loss;  // per epoch MSE, at the parameters the gradient was taken
    std::vector<double> val_mse;     // per epoch, after that epoch's update
    std::size_t best_epoch = 0;
    double best_val_mse = 0.0;
};

/// Full-sequence gradient descent with Adam: one forward filter, one backward pass and one
/// update per epoch. Validation restarts from the initial posterior at the segment start.
/// Throws NumericalError naming the epoch when the loss or a prediction is nonfinite.
TrainResult train(Forecaster model, std::span<const FeaturePair> train_segment,
                  std::span<const FeaturePair> val_segment, const TrainConfig& config);

}  // namespace pmcvol::train
