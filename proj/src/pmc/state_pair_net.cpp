#include "pmcvol/pmc/state_pair_net.hpp"

#include "pmcvol/errors.hpp"

#include <cmath>
#include <random>
#include <string>

namespace pmcvol::pmc {

StatePairNet::StatePairNet(std::size_t n_states, std::size_t obs_width)
    : StatePairNet(n_states, obs_width, std::vector<double>(parameter_count(n_states, obs_width), 0.0)) {}

StatePairNet::StatePairNet(std::size_t n_states, std::size_t obs_width, std::vector<double> params)
    : n_states_(n_states), obs_width_(obs_width), params_(std::move(params)) {
    if (n_states_ == 0 || obs_width_ == 0) {
        throw ConfigError("state-pair network needs at least one state and one observation input");
    }
    if (params_.size() != parameter_count(n_states_, obs_width_)) {
        throw ConfigError("state-pair network expects " +
                          std::to_string(parameter_count(n_states_, obs_width_)) +
                          " parameters, got " + std::to_string(params_.size()));
    }
}

StatePairNet StatePairNet::init(std::size_t n_states, std::size_t obs_width, std::uint64_t seed) {
    StatePairNet net(n_states, obs_width);
    std::mt19937_64 rng(seed);
    const std::size_t in = net.input_width();
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> w(-bound, bound);
    auto p = net.parameters();
    for (std::size_t i = 0; i < in * in; ++i) {
        p[i] = w(rng);
    }
    for (std::size_t k = 0; k < in; ++k) {
        p[in * in + in + k] = w(rng);
    }
    return net;
}

}  // namespace pmcvol::pmc
