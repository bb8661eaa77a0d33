#pragma once

#include "pmcvol/models/base_model.hpp"
#include "pmcvol/pmc/posterior.hpp"
#include "pmcvol/pmc/state_pair_net.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace pmcvol::pmc {

using data::FeaturePair;
using models::BaseKind;
using models::BaseModel;

/// Positive weight w(x_t, x_{t+1}, y_t, y_{t+1}) standing in for
/// [p(x_t|y_t,y_{t+1}) / p(x_t|y_t)] * p(x_{t+1}|x_t,y_t,y_{t+1}).
class TransitionWeightNet {
public:
    static constexpr std::size_t kObsWidth = 4;

    explicit TransitionWeightNet(std::size_t n_states) : net_(n_states, kObsWidth) {}
    explicit TransitionWeightNet(StatePairNet net);
    static TransitionWeightNet init(std::size_t n_states, std::uint64_t seed) {
        return TransitionWeightNet(StatePairNet::init(n_states, kObsWidth, seed));
    }

    [[nodiscard]] std::size_t n_states() const { return net_.n_states(); }
    [[nodiscard]] std::size_t parameter_count() const { return net_.parameter_count(); }
    [[nodiscard]] std::span<const double> parameters() const { return net_.parameters(); }
    [[nodiscard]] std::span<double> parameters() { return net_.parameters(); }
    [[nodiscard]] const StatePairNet& network() const { return net_; }

    static std::array<double, kObsWidth> observations(const FeaturePair& yt, const FeaturePair& ynext) {
        return {yt.sigma2, yt.u2, ynext.sigma2, ynext.u2};
    }

    [[nodiscard]] double operator()(std::size_t from, std::size_t to, const FeaturePair& yt,
                                    const FeaturePair& ynext) const {
        return net_(from, to, observations(yt, ynext));
    }

    template <class T>
    static std::vector<T> weight_matrix(std::size_t n_states, std::span<const T> p,
                                        const FeaturePair& yt, const FeaturePair& ynext) {
        const auto obs = observations(yt, ynext);
        return StatePairNet::weight_matrix<T>(n_states, kObsWidth, p, obs);
    }

private:
    StatePairNet net_;
};

/// One filtering step driven by any weight function w(from, to, y_t, y_next):
/// gamma(x') = sum_x posterior(x) w(x, x', y_t, y_next), normalized.
template <class Net, class Obs>
FilteredPosterior gamma_step(const FilteredPosterior& posterior, const Obs& yt, const Obs& ynext,
                             const Net& net) {
    const std::size_t n = posterior.size();
    std::vector<double> w(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            w[i * n + j] = net(i, j, yt, ynext);
        }
    }
    return FilteredPosterior(propagate<double>(posterior.probs(), w));
}

/// sum_x posterior(x) * expert_x(y_t).
double pmc_predict(const FilteredPosterior& posterior, const FeaturePair& yt,
                   std::span<const BaseModel> experts);

/// PMC(N)-f: N experts of one base kind, a transition weight network and trainable
/// initial-posterior logits. Flat parameter layout: experts in order, network, logits.
class PmcModel {
public:
    PmcModel(std::vector<BaseModel> experts, TransitionWeightNet weight_net,
             std::vector<double> initial_logits);

    /// Expert 0 uses `seed` itself, so PMC(1)-f starts from the same point as f.
    /// Initial logits are zero (uniform posterior).
    static PmcModel init(BaseKind base, std::size_t n_states, std::uint64_t seed);

    [[nodiscard]] std::size_t n_states() const { return experts_.size(); }
    [[nodiscard]] BaseKind base_kind() const { return experts_.front().kind(); }
    [[nodiscard]] std::span<const BaseModel> experts() const { return experts_; }
    [[nodiscard]] const TransitionWeightNet& weight_net() const { return weight_net_; }
    [[nodiscard]] std::span<const double> initial_logits() const { return logits_; }
    [[nodiscard]] FilteredPosterior initial_posterior() const;

    [[nodiscard]] std::size_t parameter_count() const;
    [[nodiscard]] std::vector<double> flatten() const;
    void assign(std::span<const double> flat);

    /// Runs the filter over `ys` with parameters taken from `flat` (same layout as flatten()).
    template <class T>
    FilterTrace<T> filter(std::span<const T> flat, std::span<const FeaturePair> ys) const;

private:
    std::vector<BaseModel> experts_;
    TransitionWeightNet weight_net_;
    std::vector<double> logits_;
};

struct FilterResult {
    std::vector<FilteredPosterior> posteriors;  // length T
    std::vector<double> predictions;            // length T-1, predictions[t] targets sigma2_{t+1}
};

/// posterior[0] is the model's initial posterior; prediction[t] uses posterior[t] and y_t only;
/// posterior[t+1] is updated from (y_t, y_{t+1}). Throws InvalidInput when T < 2.
FilterResult forward_filter(const PmcModel& model, std::span<const FeaturePair> ys);

template <class T>
FilterTrace<T> PmcModel::filter(std::span<const T> flat, std::span<const FeaturePair> ys) const {
    const std::size_t n = n_states();
    const BaseKind kind = base_kind();
    const std::size_t pe = BaseModel::parameter_count(kind);
    const auto net_params = flat.subspan(n * pe, weight_net_.parameter_count());
    const auto logits = flat.subspan(n * pe + weight_net_.parameter_count(), n);

    FilterTrace<T> trace;
    trace.posteriors.reserve(ys.size());
    trace.predictions.reserve(ys.empty() ? 0 : ys.size() - 1);
    std::vector<T> posterior = softmax<T>(logits);
    for (std::size_t t = 0; t + 1 < ys.size(); ++t) {
        T pred = posterior[0] * BaseModel::evaluate<T>(kind, flat.subspan(0, pe), ys[t].sigma2, ys[t].u2);
        for (std::size_t x = 1; x < n; ++x) {
            pred = pred + posterior[x] * BaseModel::evaluate<T>(kind, flat.subspan(x * pe, pe),
                                                                 ys[t].sigma2, ys[t].u2);
        }
        trace.predictions.push_back(pred);
        const auto w = TransitionWeightNet::weight_matrix<T>(n, net_params, ys[t], ys[t + 1]);
        auto next = propagate<T>(posterior, w);
        trace.posteriors.push_back(std::move(posterior));
        posterior = std::move(next);
    }
    trace.posteriors.push_back(std::move(posterior));
    return trace;
}

}  // namespace pmcvol::pmc
