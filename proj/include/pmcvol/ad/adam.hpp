#pragma once

#include <cstdint>
#include <span>

namespace pmcvol::ad {

struct AdamConfig {
    double learning_rate = 0.05;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    /// Throws ConfigError unless learning_rate > 0 and both betas lie in [0,1).
    void validate() const;
};

/// A trainable scalar with its gradient slot and Adam moments.
struct Param {
    double value = 0.0;
    double grad = 0.0;
    double m = 0.0;
    double v = 0.0;
    std::int64_t step = 0;
};

/// One bias-corrected Adam update on every parameter; gradients are zeroed afterwards.
void adam_step(std::span<Param> params, const AdamConfig& config);

}  // namespace pmcvol::ad
