#include "pmcvol/hmc/hmc_model.hpp"

#include "pmcvol/errors.hpp"
#include "pmcvol/util/seeds.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace pmcvol::hmc {

DeltaWeightNet::DeltaWeightNet(StatePairNet net) : net_(std::move(net)) {
    if (net_.obs_width() != kObsWidth) {
        throw ConfigError("delta weight network must see y_{t+1} only");
    }
}

double hmc_predict(const FilteredPosterior& posterior, const FeaturePair& yt, std::span<const AffineHead> heads,
                   bool constant_only) {
    if (heads.size() != posterior.size()) {
        throw InvalidInput("hmc_predict: posterior has " + std::to_string(posterior.size()) +
                           " states but there are " + std::to_string(heads.size()) + " heads");
    }
    double pred = posterior[0] * heads[0](yt, constant_only);
    for (std::size_t x = 1; x < heads.size(); ++x) {
        pred = pred + posterior[x] * heads[x](yt, constant_only);
    }
    return pred;
}

HmcModel::HmcModel(std::vector<AffineHead> heads, DeltaWeightNet net, std::vector<double> initial_logits,
                   bool constant_heads)
    : heads_(std::move(heads)), net_(std::move(net)), logits_(std::move(initial_logits)),
      constant_heads_(constant_heads) {
    if (heads_.empty()) {
        throw ConfigError("HMC needs at least one hidden state");
    }
    if (net_.n_states() != heads_.size() || logits_.size() != heads_.size()) {
        throw ConfigError("HMC components disagree on the number of hidden states");
    }
    if (constant_heads_) {
        for (auto& h : heads_) {
            h.w_sigma2 = 0.0;
            h.w_u2 = 0.0;
        }
    }
}

HmcModel HmcModel::init(std::size_t n_states, std::uint64_t seed, bool constant_heads) {
    if (n_states == 0) {
        throw ConfigError("HMC needs at least one hidden state");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> slope(-0.5, 0.5);
    std::vector<AffineHead> heads(n_states);
    for (auto& h : heads) {
        h.w_sigma2 = slope(rng);
        h.w_u2 = slope(rng);
    }
    return {std::move(heads), DeltaWeightNet::init(n_states, util::derive_seed(seed, 1000)),
            std::vector<double>(n_states, 0.0), constant_heads};
}

FilteredPosterior HmcModel::initial_posterior() const {
    return FilteredPosterior(pmc::softmax<double>(logits_));
}

std::size_t HmcModel::parameter_count() const {
    return n_states() * head_width() + net_.parameter_count() + n_states();
}

std::vector<double> HmcModel::flatten() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (const auto& h : heads_) {
        flat.push_back(h.intercept);
        if (!constant_heads_) {
            flat.push_back(h.w_sigma2);
            flat.push_back(h.w_u2);
        }
    }
    const auto net = net_.parameters();
    flat.insert(flat.end(), net.begin(), net.end());
    flat.insert(flat.end(), logits_.begin(), logits_.end());
    return flat;
}

void HmcModel::assign(std::span<const double> flat) {
    if (flat.size() != parameter_count()) {
        throw ConfigError("HMC parameter vector has the wrong length");
    }
    std::size_t offset = 0;
    for (auto& h : heads_) {
        h.intercept = flat[offset++];
        if (!constant_heads_) {
            h.w_sigma2 = flat[offset++];
            h.w_u2 = flat[offset++];
        }
    }
    auto net = net_.parameters();
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset), net.size(), net.begin());
    offset += net.size();
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset), logits_.size(), logits_.begin());
}

void ExplicitHmm::validate() const {
    if (n_states == 0 || n_symbols == 0 || pi.size() != n_states || a.size() != n_states * n_states ||
        b.size() != n_states * n_symbols) {
        throw InvalidInput("explicit HMM tables have inconsistent sizes");
    }
    auto check_row = [](std::span<const double> row) {
        double total = 0.0;
        for (double v : row) {
            if (!(v >= 0.0)) {
                throw InvalidInput("explicit HMM table has a negative entry");
            }
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw InvalidInput("explicit HMM table row sums to " + std::to_string(total));
        }
    };
    check_row(pi);
    for (std::size_t x = 0; x < n_states; ++x) {
        check_row(std::span<const double>(a).subspan(x * n_states, n_states));
        check_row(std::span<const double>(b).subspan(x * n_symbols, n_symbols));
    }
}

ExactDeltaWeight::ExactDeltaWeight(const ExplicitHmm& hmm) : n_(hmm.n_states), m_(hmm.n_symbols) {
    hmm.validate();
    std::vector<double> r(n_, 0.0);
    for (std::size_t x = 0; x < n_; ++x) {
        for (std::size_t x2 = 0; x2 < n_; ++x2) {
            r[x2] += hmm.pi[x] * hmm.a[x * n_ + x2];
        }
    }
    for (std::size_t x2 = 0; x2 < n_; ++x2) {
        if (!(r[x2] > 0.0)) {
            throw DegenerateData("exact delta weight: state " + std::to_string(x2) + " has zero marginal");
        }
    }
    table_.resize(m_ * n_ * n_);
    for (std::size_t y = 0; y < m_; ++y) {
        double evidence = 0.0;
        for (std::size_t k = 0; k < n_; ++k) {
            evidence += r[k] * hmm.b[k * m_ + y];
        }
        if (!(evidence > 0.0)) {
            throw DegenerateData("exact delta weight: symbol " + std::to_string(y) + " has zero probability");
        }
        for (std::size_t x = 0; x < n_; ++x) {
            for (std::size_t x2 = 0; x2 < n_; ++x2) {
                const double post = r[x2] * hmm.b[x2 * m_ + y] / evidence;
                table_[(y * n_ + x) * n_ + x2] = hmm.a[x * n_ + x2] / r[x2] * post;
            }
        }
    }
}

double ExactDeltaWeight::operator()(std::size_t from, std::size_t to, std::size_t ynext) const {
    return table_[(ynext * n_ + from) * n_ + to];
}

std::vector<FilteredPosterior> hmm_delta_posteriors(const ExplicitHmm& hmm, std::span<const std::size_t> ys) {
    if (ys.empty()) {
        throw InvalidInput("observation sequence is empty");
    }
    const ExactDeltaWeight w(hmm);
    for (auto y : ys) {
        if (y >= hmm.n_symbols) {
            throw InvalidInput("observation symbol " + std::to_string(y) + " outside the alphabet");
        }
    }
    std::vector<double> first(hmm.n_states);
    double total = 0.0;
    for (std::size_t x = 0; x < hmm.n_states; ++x) {
        first[x] = hmm.pi[x] * hmm.b[x * hmm.n_symbols + ys[0]];
        total += first[x];
    }
    if (!(total > 0.0)) {
        throw DegenerateData("first observation has zero probability");
    }
    for (auto& v : first) {
        v /= total;
    }
    std::vector<FilteredPosterior> out;
    out.emplace_back(std::move(first));
    for (std::size_t t = 1; t < ys.size(); ++t) {
        out.push_back(delta_step(out.back(), ys[t], w));
    }
    return out;
}

}  // namespace pmcvol::hmc
