#include "pmcvol/train/trainer.hpp"

#include "pmcvol/ad/adam.hpp"
#include "pmcvol/errors.hpp"

#include <cmath>
#include <string>

namespace pmcvol::train {

void TrainConfig::validate() const {
    if (epochs == 0) {
        throw ConfigError("epochs must be at least 1");
    }
    if (patience == 0 || patience > epochs) {
        throw ConfigError("patience must lie in [1, epochs]; got " + std::to_string(patience) + " with " +
                          std::to_string(epochs) + " epochs");
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning rate must be positive");
    }
}

LossGradient loss_and_gradient(const Forecaster& model, std::span<const double> flat,
                               std::span<const FeaturePair> ys, ad::Tape& tape) {
    if (ys.size() < 2) {
        throw InvalidInput("loss needs at least two observations");
    }
    tape.clear();
    std::vector<ad::Var> leaves;
    leaves.reserve(flat.size());
    for (double v : flat) {
        leaves.push_back(tape.variable(v));
    }
    const ad::Var loss = sequence_sse<ad::Var>(model, leaves, ys);
    const auto adjoints = tape.backward(loss);
    LossGradient out;
    out.sse = loss.value();
    out.n_terms = ys.size() - 1;
    out.gradient.reserve(leaves.size());
    for (const auto& leaf : leaves) {
        out.gradient.push_back(adjoints[static_cast<std::size_t>(leaf.id())]);
    }
    return out;
}

double segment_mse(const Forecaster& model, std::span<const FeaturePair> ys) {
    if (ys.size() < 2) {
        throw InvalidInput("segment needs at least two observations");
    }
    const auto flat = model.flatten();
    return sequence_sse<double>(model, flat, ys) / static_cast<double>(ys.size() - 1);
}

TrainResult train(Forecaster model, std::span<const FeaturePair> train_segment,
                  std::span<const FeaturePair> val_segment, const TrainConfig& config) {
    config.validate();
    if (train_segment.size() < 2 || val_segment.size() < 2) {
        throw InvalidInput("training and validation segments need at least two observations each");
    }
    const ad::AdamConfig adam{config.learning_rate};
    adam.validate();

    std::vector<ad::Param> params;
    for (double v : model.flatten()) {
        params.push_back({v});
    }
    std::vector<double> flat(params.size());
    ad::Tape tape;

    TrainResult result{model, {}, {}, 0, 0.0};
    result.train_loss.reserve(config.epochs);
    result.val_mse.reserve(config.epochs);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t i = 0; i < params.size(); ++i) {
            flat[i] = params[i].value;
        }
        LossGradient lg;
        try {
            lg = loss_and_gradient(model, flat, train_segment, tape);
        } catch (const NumericalError& e) {
            throw NumericalError("epoch " + std::to_string(epoch) + ": training loss is nonfinite (" +
                                 e.what() + ")");
        }
        result.train_loss.push_back(lg.mse());
        for (std::size_t i = 0; i < params.size(); ++i) {
            params[i].grad = lg.gradient[i];
        }
        ad::adam_step(params, adam);

        for (std::size_t i = 0; i < params.size(); ++i) {
            flat[i] = params[i].value;
        }
        model.assign(flat);
        double val = 0.0;
        try {
            val = segment_mse(model, val_segment);
        } catch (const NumericalError& e) {
            throw NumericalError("epoch " + std::to_string(epoch) + ": validation filter failed (" + e.what() +
                                 ")");
        }
        if (!std::isfinite(val)) {
            throw NumericalError("epoch " + std::to_string(epoch) + ": validation MSE is nonfinite");
        }
        result.val_mse.push_back(val);
        if (epoch == 0 || val < result.best_val_mse) {
            result.best_val_mse = val;
            result.best_epoch = epoch;
            result.model = model;
        } else if (epoch - result.best_epoch >= config.patience) {
            break;
        }
    }
    return result;
}

}  // namespace pmcvol::train
