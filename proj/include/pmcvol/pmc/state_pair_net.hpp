#pragma once

#include "pmcvol/ad/tape.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace pmcvol::pmc {

/// Lower bound added to every network output so a posterior update never sees all-zero weights.
inline constexpr double kWeightFloor = 1e-6;

/// Strictly positive network over a pair of hidden states plus real-valued observations:
///   input  = [one_hot(from) (N), one_hot(to) (N), obs (obs_width)]
///   hidden = tanh(W1 * input + b1), width equal to the input width
///   output = softplus(w2 . hidden + b2) + kWeightFloor
/// Parameters are flat: W1 (row-major), b1, w2, b2.
class StatePairNet {
public:
    StatePairNet(std::size_t n_states, std::size_t obs_width);
    StatePairNet(std::size_t n_states, std::size_t obs_width, std::vector<double> params);

    /// W1 ~ U(-1/sqrt(in), 1/sqrt(in)), w2 ~ U(-1/sqrt(hidden), 1/sqrt(hidden)), biases 0.
    static StatePairNet init(std::size_t n_states, std::size_t obs_width, std::uint64_t seed);

    [[nodiscard]] std::size_t n_states() const { return n_states_; }
    [[nodiscard]] std::size_t obs_width() const { return obs_width_; }
    [[nodiscard]] std::size_t input_width() const { return 2 * n_states_ + obs_width_; }
    [[nodiscard]] std::size_t hidden_width() const { return input_width(); }
    [[nodiscard]] std::size_t parameter_count() const { return parameter_count(n_states_, obs_width_); }
    [[nodiscard]] std::span<const double> parameters() const { return params_; }
    [[nodiscard]] std::span<double> parameters() { return params_; }

    [[nodiscard]] double operator()(std::size_t from, std::size_t to, std::span<const double> obs) const {
        return evaluate<double>(n_states_, obs_width_, params_, from, to, obs);
    }

    static std::size_t parameter_count(std::size_t n_states, std::size_t obs_width) {
        const std::size_t in = 2 * n_states + obs_width;
        return in * in + 2 * in + 1;
    }

    template <class T>
    static T evaluate(std::size_t n_states, std::size_t obs_width, std::span<const T> p,
                      std::size_t from, std::size_t to, std::span<const double> obs) {
        const auto shared = shared_terms(n_states, obs_width, p, obs);
        return pair_output(n_states, obs_width, p, shared, from, to);
    }

    /// Row-major N x N matrix of outputs, entry [from * N + to]. The observation part of
    /// the first layer is computed once and reused for every state pair.
    template <class T>
    static std::vector<T> weight_matrix(std::size_t n_states, std::size_t obs_width,
                                        std::span<const T> p, std::span<const double> obs) {
        const auto shared = shared_terms(n_states, obs_width, p, obs);
        std::vector<T> out;
        out.reserve(n_states * n_states);
        for (std::size_t i = 0; i < n_states; ++i) {
            for (std::size_t j = 0; j < n_states; ++j) {
                out.push_back(pair_output(n_states, obs_width, p, shared, i, j));
            }
        }
        return out;
    }

private:
    template <class T>
    static std::vector<T> shared_terms(std::size_t n_states, std::size_t obs_width,
                                       std::span<const T> p, std::span<const double> obs) {
        const std::size_t in = 2 * n_states + obs_width;
        const std::size_t bias = in * in;
        std::vector<T> shared;
        shared.reserve(in);
        for (std::size_t k = 0; k < in; ++k) {
            const T* row = &p[k * in + 2 * n_states];
            T s = row[0] * obs[0];
            for (std::size_t m = 1; m < obs_width; ++m) {
                s = s + row[m] * obs[m];
            }
            shared.push_back(s + p[bias + k]);
        }
        return shared;
    }

    template <class T>
    static T pair_output(std::size_t n_states, std::size_t obs_width, std::span<const T> p,
                         const std::vector<T>& shared, std::size_t from, std::size_t to) {
        const std::size_t in = 2 * n_states + obs_width;
        const std::size_t out_w = in * in + in;
        T z = p[out_w] * ad::tanh(shared[0] + p[from] + p[n_states + to]);
        for (std::size_t k = 1; k < in; ++k) {
            const T* row = &p[k * in];
            z = z + p[out_w + k] * ad::tanh(shared[k] + row[from] + row[n_states + to]);
        }
        z = z + p[out_w + in];
        return ad::softplus(z) + kWeightFloor;
    }

    std::size_t n_states_;
    std::size_t obs_width_;
    std::vector<double> params_;
};

}  // namespace pmcvol::pmc
