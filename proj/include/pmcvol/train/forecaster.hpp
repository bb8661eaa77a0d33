#pragma once

#include "pmcvol/hmc/hmc_model.hpp"
#include "pmcvol/models/base_model.hpp"
#include "pmcvol/pmc/pmc_model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pmcvol::train {

using data::FeaturePair;
using models::BaseKind;

enum class Family { Plain, Pmc, Hmc };

std::string_view to_string(Family family);

/// Which model to build: a plain base forecaster, PMC(N)-base, or HMC(N).
struct ModelSpec {
    Family family = Family::Plain;
    BaseKind base = BaseKind::Garch;
    std::size_t n_states = 1;
    bool hmc_constant_heads = false;

    /// Throws ConfigError on N == 0, or N != 1 for a plain model.
    void validate() const;
    /// Table label such as "GARCH(1,1)", "PMC(2)-FNN(2,3)" or "HMC(2)".
    [[nodiscard]] std::string label() const;
    /// Table block: the base kind name for plain and PMC models, "hmc" for HMC.
    [[nodiscard]] std::string block() const;
};

std::string base_label(BaseKind kind);

/// Builds a ModelSpec from the command-line vocabulary: model is one of
/// garch|fnn2|fnn3|fnn23|hmc|pmc; base is used only by pmc. Throws ConfigError.
ModelSpec parse_model_spec(std::string_view model, std::size_t n_states, std::string_view base,
                           bool hmc_constant_heads = false);

/// Any trainable forecaster, behind one flat-parameter interface.
class Forecaster {
public:
    using Variant = std::variant<models::BaseModel, pmc::PmcModel, hmc::HmcModel>;

    explicit Forecaster(Variant model) : model_(std::move(model)) {}

    static Forecaster init(const ModelSpec& spec, std::uint64_t seed);

    [[nodiscard]] ModelSpec spec() const;
    [[nodiscard]] const Variant& model() const { return model_; }
    [[nodiscard]] std::size_t n_states() const;
    [[nodiscard]] std::size_t parameter_count() const;
    [[nodiscard]] std::vector<double> flatten() const;
    void assign(std::span<const double> flat);

    /// predictions[t] targets sigma2_{t+1}; posteriors are empty for a plain model.
    template <class T>
    pmc::FilterTrace<T> filter(std::span<const T> flat, std::span<const FeaturePair> ys) const;

    [[nodiscard]] pmc::FilterTrace<double> filter(std::span<const FeaturePair> ys) const {
        const auto flat = flatten();
        return filter<double>(flat, ys);
    }

private:
    Variant model_;
};

template <class T>
pmc::FilterTrace<T> Forecaster::filter(std::span<const T> flat, std::span<const FeaturePair> ys) const {
    if (const auto* base = std::get_if<models::BaseModel>(&model_)) {
        pmc::FilterTrace<T> trace;
        trace.predictions.reserve(ys.empty() ? 0 : ys.size() - 1);
        for (std::size_t t = 0; t + 1 < ys.size(); ++t) {
            trace.predictions.push_back(models::BaseModel::evaluate<T>(base->kind(), flat, ys[t].sigma2, ys[t].u2));
        }
        return trace;
    }
    if (const auto* p = std::get_if<pmc::PmcModel>(&model_)) {
        return p->filter<T>(flat, ys);
    }
    return std::get<hmc::HmcModel>(model_).filter<T>(flat, ys);
}

}  // namespace pmcvol::train
