#include "pmcvol/train/forecaster.hpp"

#include "pmcvol/errors.hpp"

#include <algorithm>
#include <string>
#include <type_traits>

namespace pmcvol::train {

std::string_view to_string(Family family) {
    switch (family) {
        case Family::Plain: return "plain";
        case Family::Pmc: return "pmc";
        case Family::Hmc: return "hmc";
    }
    return "plain";
}

std::string base_label(BaseKind kind) {
    switch (kind) {
        case BaseKind::Garch: return "GARCH(1,1)";
        case BaseKind::Fnn2: return "FNN(2)";
        case BaseKind::Fnn3: return "FNN(3)";
        case BaseKind::Fnn23: return "FNN(2,3)";
    }
    return "?";
}

void ModelSpec::validate() const {
    if (n_states == 0) {
        throw ConfigError("number of hidden states must be at least 1");
    }
    if (family == Family::Plain && n_states != 1) {
        throw ConfigError("a plain base model has no hidden states; use the pmc model for N > 1");
    }
}

std::string ModelSpec::label() const {
    const std::string n = std::to_string(n_states);
    switch (family) {
        case Family::Plain: return base_label(base);
        case Family::Pmc: return "PMC(" + n + ")-" + base_label(base);
        case Family::Hmc: return "HMC(" + n + ")" + (hmc_constant_heads ? " [const]" : "");
    }
    return "?";
}

std::string ModelSpec::block() const {
    return family == Family::Hmc ? "hmc" : std::string(models::to_string(base));
}

ModelSpec parse_model_spec(std::string_view model, std::size_t n_states, std::string_view base,
                           bool hmc_constant_heads) {
    ModelSpec spec;
    spec.n_states = n_states;
    spec.hmc_constant_heads = hmc_constant_heads;
    if (model == "pmc") {
        spec.family = Family::Pmc;
        spec.base = models::parse_base_kind(base);
    } else if (model == "hmc") {
        spec.family = Family::Hmc;
    } else {
        spec.family = Family::Plain;
        spec.base = models::parse_base_kind(model);
    }
    spec.validate();
    return spec;
}

Forecaster Forecaster::init(const ModelSpec& spec, std::uint64_t seed) {
    spec.validate();
    switch (spec.family) {
        case Family::Plain: return Forecaster(models::init_model(spec.base, seed));
        case Family::Pmc: return Forecaster(pmc::PmcModel::init(spec.base, spec.n_states, seed));
        case Family::Hmc: return Forecaster(hmc::HmcModel::init(spec.n_states, seed, spec.hmc_constant_heads));
    }
    throw ConfigError("unknown model family");
}

ModelSpec Forecaster::spec() const {
    ModelSpec s;
    if (const auto* b = std::get_if<models::BaseModel>(&model_)) {
        s.family = Family::Plain;
        s.base = b->kind();
    } else if (const auto* p = std::get_if<pmc::PmcModel>(&model_)) {
        s.family = Family::Pmc;
        s.base = p->base_kind();
        s.n_states = p->n_states();
    } else {
        const auto& h = std::get<hmc::HmcModel>(model_);
        s.family = Family::Hmc;
        s.n_states = h.n_states();
        s.hmc_constant_heads = h.constant_heads();
    }
    return s;
}

std::size_t Forecaster::n_states() const { return spec().n_states; }

std::size_t Forecaster::parameter_count() const {
    return std::visit(
        [](const auto& m) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, models::BaseModel>) {
                return m.parameters().size();
            } else {
                return m.parameter_count();
            }
        },
        model_);
}

std::vector<double> Forecaster::flatten() const {
    return std::visit(
        [](const auto& m) -> std::vector<double> {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, models::BaseModel>) {
                return {m.parameters().begin(), m.parameters().end()};
            } else {
                return m.flatten();
            }
        },
        model_);
}

void Forecaster::assign(std::span<const double> flat) {
    std::visit(
        [&](auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, models::BaseModel>) {
                if (flat.size() != m.parameters().size()) {
                    throw ConfigError("base model parameter vector has the wrong length");
                }
                std::copy(flat.begin(), flat.end(), m.parameters().begin());
            } else {
                m.assign(flat);
            }
        },
        model_);
}

}  // namespace pmcvol::train
