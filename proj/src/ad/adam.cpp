#include "pmcvol/ad/adam.hpp"

#include "pmcvol/errors.hpp"

#include <cmath>

namespace pmcvol::ad {

void AdamConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("Adam learning rate must be positive");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw ConfigError("Adam betas must lie in [0,1)");
    }
    if (!(epsilon > 0.0)) {
        throw ConfigError("Adam epsilon must be positive");
    }
}

void adam_step(std::span<Param> params, const AdamConfig& config) {
    for (auto& p : params) {
        p.step += 1;
        p.m = config.beta1 * p.m + (1.0 - config.beta1) * p.grad;
        p.v = config.beta2 * p.v + (1.0 - config.beta2) * p.grad * p.grad;
        const auto t = static_cast<double>(p.step);
        const double m_hat = p.m / (1.0 - std::pow(config.beta1, t));
        const double v_hat = p.v / (1.0 - std::pow(config.beta2, t));
        p.value -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
        p.grad = 0.0;
    }
}

}  // namespace pmcvol::ad
