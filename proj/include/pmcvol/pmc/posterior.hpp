#pragma once

#include "pmcvol/ad/tape.hpp"
#include "pmcvol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace pmcvol::pmc {

/// p(x_t | y_{1:t}) over N hidden states.
class FilteredPosterior {
public:
    /// Throws InvalidInput on negative entries or a sum further than 1e-9 from 1.
    explicit FilteredPosterior(std::vector<double> probs);

    static FilteredPosterior uniform(std::size_t n_states);

    [[nodiscard]] std::size_t size() const { return probs_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return probs_[i]; }
    [[nodiscard]] std::span<const double> probs() const { return probs_; }
    [[nodiscard]] std::size_t argmax() const;

private:
    std::vector<double> probs_;
};

/// Filtered trace of a sequence: posteriors[t] for every t, predictions[t] of
/// sigma2_{t+1} made at time t (one fewer than posteriors).
template <class T>
struct FilterTrace {
    std::vector<std::vector<T>> posteriors;
    std::vector<T> predictions;
};

/// gamma_j = sum_i posterior_i * weights[i*n + j], then gamma / sum(gamma).
/// Throws NumericalError when the total is not a positive finite number.
template <class T>
std::vector<T> propagate(std::span<const T> posterior, std::span<const T> weights) {
    const std::size_t n = posterior.size();
    std::vector<T> gamma;
    gamma.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        T g = posterior[0] * weights[j];
        for (std::size_t i = 1; i < n; ++i) {
            g = g + posterior[i] * weights[i * n + j];
        }
        gamma.push_back(g);
    }
    T total = gamma[0];
    for (std::size_t j = 1; j < n; ++j) {
        total = total + gamma[j];
    }
    const double tv = ad::value_of(total);
    if (!(tv > 0.0) || !std::isfinite(tv)) {
        throw NumericalError("posterior update degenerated: sum of weights is " + std::to_string(tv));
    }
    for (auto& g : gamma) {
        g = g / total;
    }
    return gamma;
}

/// Normalized exponential with the max subtracted as a constant shift.
template <class T>
std::vector<T> softmax(std::span<const T> logits) {
    double shift = ad::value_of(logits[0]);
    for (const auto& l : logits) {
        shift = std::max(shift, ad::value_of(l));
    }
    std::vector<T> e;
    e.reserve(logits.size());
    for (const auto& l : logits) {
        e.push_back(ad::exp(l - shift));
    }
    T total = e[0];
    for (std::size_t i = 1; i < e.size(); ++i) {
        total = total + e[i];
    }
    for (auto& v : e) {
        v = v / total;
    }
    return e;
}

}  // namespace pmcvol::pmc
