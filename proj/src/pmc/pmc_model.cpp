#include "pmcvol/pmc/pmc_model.hpp"

#include "pmcvol/errors.hpp"
#include "pmcvol/util/seeds.hpp"

#include <algorithm>
#include <string>

namespace pmcvol::pmc {

TransitionWeightNet::TransitionWeightNet(StatePairNet net) : net_(std::move(net)) {
    if (net_.obs_width() != kObsWidth) {
        throw ConfigError("transition weight network must see (y_t, y_{t+1})");
    }
}

double pmc_predict(const FilteredPosterior& posterior, const FeaturePair& yt,
                   std::span<const BaseModel> experts) {
    if (experts.size() != posterior.size()) {
        throw InvalidInput("pmc_predict: posterior has " + std::to_string(posterior.size()) +
                           " states but there are " + std::to_string(experts.size()) + " experts");
    }
    double pred = posterior[0] * experts[0](yt);
    for (std::size_t x = 1; x < experts.size(); ++x) {
        pred = pred + posterior[x] * experts[x](yt);
    }
    return pred;
}

PmcModel::PmcModel(std::vector<BaseModel> experts, TransitionWeightNet weight_net,
                   std::vector<double> initial_logits)
    : experts_(std::move(experts)), weight_net_(std::move(weight_net)), logits_(std::move(initial_logits)) {
    if (experts_.empty()) {
        throw ConfigError("PMC needs at least one hidden state");
    }
    for (const auto& e : experts_) {
        if (e.kind() != experts_.front().kind()) {
            throw ConfigError("all PMC experts must share one base kind");
        }
    }
    if (weight_net_.n_states() != experts_.size() || logits_.size() != experts_.size()) {
        throw ConfigError("PMC components disagree on the number of hidden states");
    }
}

PmcModel PmcModel::init(BaseKind base, std::size_t n_states, std::uint64_t seed) {
    if (n_states == 0) {
        throw ConfigError("PMC needs at least one hidden state");
    }
    std::vector<BaseModel> experts;
    experts.reserve(n_states);
    for (std::size_t x = 0; x < n_states; ++x) {
        experts.push_back(models::init_model(base, x == 0 ? seed : util::derive_seed(seed, x)));
    }
    return {std::move(experts), TransitionWeightNet::init(n_states, util::derive_seed(seed, 1000)),
            std::vector<double>(n_states, 0.0)};
}

FilteredPosterior PmcModel::initial_posterior() const {
    return FilteredPosterior(softmax<double>(logits_));
}

std::size_t PmcModel::parameter_count() const {
    return n_states() * BaseModel::parameter_count(base_kind()) + weight_net_.parameter_count() +
           n_states();
}

std::vector<double> PmcModel::flatten() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (const auto& e : experts_) {
        flat.insert(flat.end(), e.parameters().begin(), e.parameters().end());
    }
    const auto net = weight_net_.parameters();
    flat.insert(flat.end(), net.begin(), net.end());
    flat.insert(flat.end(), logits_.begin(), logits_.end());
    return flat;
}

void PmcModel::assign(std::span<const double> flat) {
    if (flat.size() != parameter_count()) {
        throw ConfigError("PMC parameter vector has the wrong length");
    }
    std::size_t offset = 0;
    for (auto& e : experts_) {
        auto p = e.parameters();
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset), p.size(), p.begin());
        offset += p.size();
    }
    auto net = weight_net_.parameters();
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset), net.size(), net.begin());
    offset += net.size();
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset), logits_.size(), logits_.begin());
}

FilterResult forward_filter(const PmcModel& model, std::span<const FeaturePair> ys) {
    if (ys.size() < 2) {
        throw InvalidInput("forward_filter needs at least two observations");
    }
    const auto flat = model.flatten();
    auto trace = model.filter<double>(flat, ys);
    FilterResult out;
    out.predictions = std::move(trace.predictions);
    out.posteriors.reserve(trace.posteriors.size());
    for (auto& p : trace.posteriors) {
        out.posteriors.emplace_back(std::move(p));
    }
    return out;
}

}  // namespace pmcvol::pmc
