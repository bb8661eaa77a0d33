#pragma once

#include "pmcvol/data/features.hpp"
#include "pmcvol/pmc/posterior.hpp"
#include "pmcvol/pmc/state_pair_net.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace pmcvol::hmc {

using data::FeaturePair;
using pmc::FilteredPosterior;
using pmc::FilterTrace;
using pmc::StatePairNet;

/// Positive weight over (x_t, x_{t+1}, y_{t+1}) standing in for
/// [p(x_{t+1}|x_t) / p(x_{t+1})] * p(x_{t+1}|y_{t+1}). Never sees y_t.
class DeltaWeightNet {
public:
    static constexpr std::size_t kObsWidth = 2;

    explicit DeltaWeightNet(std::size_t n_states) : net_(n_states, kObsWidth) {}
    explicit DeltaWeightNet(StatePairNet net);
    static DeltaWeightNet init(std::size_t n_states, std::uint64_t seed) {
        return DeltaWeightNet(StatePairNet::init(n_states, kObsWidth, seed));
    }

    [[nodiscard]] std::size_t n_states() const { return net_.n_states(); }
    [[nodiscard]] std::size_t parameter_count() const { return net_.parameter_count(); }
    [[nodiscard]] std::span<const double> parameters() const { return net_.parameters(); }
    [[nodiscard]] std::span<double> parameters() { return net_.parameters(); }
    [[nodiscard]] const StatePairNet& network() const { return net_; }

    static std::array<double, kObsWidth> observations(const FeaturePair& ynext) {
        return {ynext.sigma2, ynext.u2};
    }

    [[nodiscard]] double operator()(std::size_t from, std::size_t to, const FeaturePair& ynext) const {
        return net_(from, to, observations(ynext));
    }

    template <class T>
    static std::vector<T> weight_matrix(std::size_t n_states, std::span<const T> p, const FeaturePair& ynext) {
        const auto obs = observations(ynext);
        return StatePairNet::weight_matrix<T>(n_states, kObsWidth, p, obs);
    }

private:
    StatePairNet net_;
};

/// Per-state prediction head: intercept + w_sigma2 * sigma2_t + w_u2 * u2_t.
/// In constants-only mode the slopes are absent and the head is its intercept.
struct AffineHead {
    double intercept = 0.0;
    double w_sigma2 = 0.0;
    double w_u2 = 0.0;

    [[nodiscard]] double operator()(const FeaturePair& y, bool constant_only) const {
        return constant_only ? intercept : intercept + w_sigma2 * y.sigma2 + w_u2 * y.u2;
    }
};

/// delta(x') = sum_x posterior(x) w(x, x', y_next), normalized.
template <class Net, class Obs>
FilteredPosterior delta_step(const FilteredPosterior& posterior, const Obs& ynext, const Net& net) {
    const std::size_t n = posterior.size();
    std::vector<double> w(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            w[i * n + j] = net(i, j, ynext);
        }
    }
    return FilteredPosterior(pmc::propagate<double>(posterior.probs(), w));
}

/// sum_x posterior(x) * head_x(y_t).
double hmc_predict(const FilteredPosterior& posterior, const FeaturePair& yt, std::span<const AffineHead> heads,
                   bool constant_only = false);

/// HMC(N) baseline. Flat parameter layout: heads (3 or 1 values each), network, logits.
class HmcModel {
public:
    HmcModel(std::vector<AffineHead> heads, DeltaWeightNet net, std::vector<double> initial_logits,
             bool constant_heads = false);

    /// Heads: intercept 0, slopes ~ U(-0.5, 0.5). Logits zero.
    static HmcModel init(std::size_t n_states, std::uint64_t seed, bool constant_heads = false);

    [[nodiscard]] std::size_t n_states() const { return heads_.size(); }
    [[nodiscard]] bool constant_heads() const { return constant_heads_; }
    [[nodiscard]] std::span<const AffineHead> heads() const { return heads_; }
    [[nodiscard]] const DeltaWeightNet& delta_net() const { return net_; }
    [[nodiscard]] std::span<const double> initial_logits() const { return logits_; }
    [[nodiscard]] FilteredPosterior initial_posterior() const;

    [[nodiscard]] std::size_t head_width() const { return constant_heads_ ? 1 : 3; }
    [[nodiscard]] std::size_t parameter_count() const;
    [[nodiscard]] std::vector<double> flatten() const;
    void assign(std::span<const double> flat);

    template <class T>
    FilterTrace<T> filter(std::span<const T> flat, std::span<const FeaturePair> ys) const;

private:
    std::vector<AffineHead> heads_;
    DeltaWeightNet net_;
    std::vector<double> logits_;
    bool constant_heads_ = false;
};

template <class T>
FilterTrace<T> HmcModel::filter(std::span<const T> flat, std::span<const FeaturePair> ys) const {
    const std::size_t n = n_states();
    const std::size_t hw = head_width();
    const auto net_params = flat.subspan(n * hw, net_.parameter_count());
    const auto logits = flat.subspan(n * hw + net_.parameter_count(), n);
    auto head = [&](std::size_t x, const FeaturePair& y) -> T {
        const T& c = flat[x * hw];
        if (hw == 1) {
            return c;
        }
        return c + flat[x * hw + 1] * y.sigma2 + flat[x * hw + 2] * y.u2;
    };

    FilterTrace<T> trace;
    trace.posteriors.reserve(ys.size());
    trace.predictions.reserve(ys.empty() ? 0 : ys.size() - 1);
    std::vector<T> posterior = pmc::softmax<T>(logits);
    for (std::size_t t = 0; t + 1 < ys.size(); ++t) {
        T pred = posterior[0] * head(0, ys[t]);
        for (std::size_t x = 1; x < n; ++x) {
            pred = pred + posterior[x] * head(x, ys[t]);
        }
        trace.predictions.push_back(pred);
        const auto w = DeltaWeightNet::weight_matrix<T>(n, net_params, ys[t + 1]);
        auto next = pmc::propagate<T>(posterior, w);
        trace.posteriors.push_back(std::move(posterior));
        posterior = std::move(next);
    }
    trace.posteriors.push_back(std::move(posterior));
    return trace;
}

/// Explicit HMM given by pi[N], A[N*N] (row-major p(x'|x)) and B[N*M] (p(y|x)).
struct ExplicitHmm {
    std::size_t n_states = 0;
    std::size_t n_symbols = 0;
    std::vector<double> pi;
    std::vector<double> a;
    std::vector<double> b;

    void validate() const;
};

/// Exact delta weight of an explicit HMM for discrete observations:
/// w(x, x', y') = A[x][x'] / r(x') * r(x'|y'), where r = pi A is the one-step marginal and
/// r(x'|y') the matching Bayes posterior. Throws DegenerateData when r(x') or r(y') is zero.
class ExactDeltaWeight {
public:
    explicit ExactDeltaWeight(const ExplicitHmm& hmm);
    [[nodiscard]] double operator()(std::size_t from, std::size_t to, std::size_t ynext) const;

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<double> table_;  // [y'][x][x']
};

/// p(x_1|y_1) from pi and B, then delta_step with ExactDeltaWeight.
std::vector<FilteredPosterior> hmm_delta_posteriors(const ExplicitHmm& hmm, std::span<const std::size_t> ys);

}  // namespace pmcvol::hmc
