#include "pmcvol/models/base_model.hpp"

#include "pmcvol/errors.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>

namespace pmcvol::models {

namespace {

constexpr std::array<std::size_t, 1> kFnn2{2};
constexpr std::array<std::size_t, 1> kFnn3{3};
constexpr std::array<std::size_t, 2> kFnn23{3, 3};

std::vector<std::size_t> layer_dims(BaseKind kind) {
    std::vector<std::size_t> dims{2};
    for (auto h : hidden_layers(kind)) {
        dims.push_back(h);
    }
    dims.push_back(1);
    return dims;
}

}  // namespace

std::string_view to_string(BaseKind kind) {
    switch (kind) {
        case BaseKind::Garch: return "garch";
        case BaseKind::Fnn2: return "fnn2";
        case BaseKind::Fnn3: return "fnn3";
        case BaseKind::Fnn23: return "fnn23";
    }
    return "?";
}

BaseKind parse_base_kind(std::string_view name) {
    for (auto k : {BaseKind::Garch, BaseKind::Fnn2, BaseKind::Fnn3, BaseKind::Fnn23}) {
        if (name == to_string(k)) {
            return k;
        }
    }
    throw ConfigError("unknown base model '" + std::string(name) + "'");
}

std::span<const std::size_t> hidden_layers(BaseKind kind) {
    switch (kind) {
        case BaseKind::Garch: return {};
        case BaseKind::Fnn2: return kFnn2;
        case BaseKind::Fnn3: return kFnn3;
        case BaseKind::Fnn23: return kFnn23;
    }
    return {};
}

double garch_forecast(const GarchParams& p, double sigma2, double u2) {
    return p.omega + p.alpha * u2 + p.beta * sigma2;
}

void FnnParams::validate() const {
    if (arch == BaseKind::Garch) {
        throw ConfigError("FnnParams: architecture must be an FNN kind");
    }
    const auto dims = layer_dims(arch);
    if (layers.size() != dims.size() - 1) {
        throw ConfigError("FnnParams: wrong number of layers for " + std::string(to_string(arch)));
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& layer = layers[l];
        if (layer.in != dims[l] || layer.out != dims[l + 1] ||
            layer.weights.size() != layer.in * layer.out || layer.bias.size() != layer.out) {
            throw ConfigError("FnnParams: layer " + std::to_string(l) + " has the wrong shape");
        }
    }
}

double fnn_forward(const FnnParams& p, double sigma2, double u2) {
    return BaseModel::from_fnn(p)(FeaturePair{sigma2, u2});
}

BaseModel::BaseModel(BaseKind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {
    if (params_.size() != parameter_count(kind_)) {
        throw ConfigError("base model " + std::string(to_string(kind_)) + " expects " +
                          std::to_string(parameter_count(kind_)) + " parameters, got " +
                          std::to_string(params_.size()));
    }
}

BaseModel BaseModel::from_garch(const GarchParams& p) {
    return {BaseKind::Garch, {p.omega, p.alpha, p.beta}};
}

BaseModel BaseModel::from_fnn(const FnnParams& p) {
    p.validate();
    std::vector<double> flat;
    for (const auto& layer : p.layers) {
        flat.insert(flat.end(), layer.weights.begin(), layer.weights.end());
        flat.insert(flat.end(), layer.bias.begin(), layer.bias.end());
    }
    return {p.arch, std::move(flat)};
}

GarchParams BaseModel::garch() const {
    if (kind_ != BaseKind::Garch) {
        throw ConfigError("garch(): model is " + std::string(to_string(kind_)));
    }
    return {params_[0], params_[1], params_[2]};
}

FnnParams BaseModel::fnn() const {
    if (kind_ == BaseKind::Garch) {
        throw ConfigError("fnn(): model is garch");
    }
    FnnParams out;
    out.arch = kind_;
    const auto dims = layer_dims(kind_);
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        DenseLayer layer;
        layer.in = dims[l];
        layer.out = dims[l + 1];
        const auto nw = layer.in * layer.out;
        layer.weights.assign(params_.begin() + static_cast<std::ptrdiff_t>(offset),
                             params_.begin() + static_cast<std::ptrdiff_t>(offset + nw));
        layer.bias.assign(params_.begin() + static_cast<std::ptrdiff_t>(offset + nw),
                          params_.begin() + static_cast<std::ptrdiff_t>(offset + nw + layer.out));
        offset += nw + layer.out;
        out.layers.push_back(std::move(layer));
    }
    return out;
}

std::size_t BaseModel::parameter_count(BaseKind kind) {
    if (kind == BaseKind::Garch) {
        return 3;
    }
    const auto dims = layer_dims(kind);
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        n += dims[l] * dims[l + 1] + dims[l + 1];
    }
    return n;
}

BaseModel init_model(BaseKind kind, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    if (kind == BaseKind::Garch) {
        std::uniform_real_distribution<double> small(-0.1, 0.1);
        std::uniform_real_distribution<double> persistence(0.3, 0.9);
        GarchParams p;
        p.omega = small(rng);
        p.alpha = small(rng);
        p.beta = persistence(rng);
        return BaseModel::from_garch(p);
    }
    FnnParams p;
    p.arch = kind;
    const auto dims = layer_dims(kind);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        DenseLayer layer;
        layer.in = dims[l];
        layer.out = dims[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
        std::uniform_real_distribution<double> w(-bound, bound);
        layer.weights.resize(layer.in * layer.out);
        for (auto& v : layer.weights) {
            v = w(rng);
        }
        layer.bias.assign(layer.out, 0.0);
        p.layers.push_back(std::move(layer));
    }
    return BaseModel::from_fnn(p);
}

}  // namespace pmcvol::models
