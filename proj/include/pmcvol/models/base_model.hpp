#pragma once

#include "pmcvol/ad/tape.hpp"
#include "pmcvol/data/features.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace pmcvol::models {

using data::FeaturePair;

/// Forecasters f(sigma2_t, u2_t) -> sigma2_{t+1} that can be composed into a PMC.
enum class BaseKind { Garch, Fnn2, Fnn3, Fnn23 };

std::string_view to_string(BaseKind kind);
/// Accepts "garch", "fnn2", "fnn3", "fnn23". Throws ConfigError otherwise.
BaseKind parse_base_kind(std::string_view name);

/// Hidden layer widths: FNN(2) -> {2}, FNN(3) -> {3}, FNN(2,3) -> {3,3}, GARCH -> {}.
std::span<const std::size_t> hidden_layers(BaseKind kind);

inline constexpr std::size_t kMaxHiddenWidth = 3;

struct GarchParams {
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

/// omega + alpha * u2 + beta * sigma2. No sign or stationarity constraints.
double garch_forecast(const GarchParams& p, double sigma2, double u2);

struct DenseLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weights;  // out x in, row-major
    std::vector<double> bias;     // out
};

struct FnnParams {
    BaseKind arch = BaseKind::Fnn2;
    std::vector<DenseLayer> layers;

    /// Shapes must chain 2 -> hidden... -> 1 as dictated by `arch`.
    void validate() const;
};

/// tanh on every hidden layer, affine output.
double fnn_forward(const FnnParams& p, double sigma2, double u2);

/// A base forecaster: kind tag plus its parameters stored flat
/// (GARCH: omega, alpha, beta; FNN: per layer, row-major weights then bias).
class BaseModel {
public:
    BaseModel(BaseKind kind, std::vector<double> params);

    static BaseModel from_garch(const GarchParams& p);
    static BaseModel from_fnn(const FnnParams& p);

    [[nodiscard]] BaseKind kind() const { return kind_; }
    [[nodiscard]] std::span<const double> parameters() const { return params_; }
    [[nodiscard]] std::span<double> parameters() { return params_; }

    [[nodiscard]] GarchParams garch() const;
    [[nodiscard]] FnnParams fnn() const;

    [[nodiscard]] double operator()(const FeaturePair& y) const {
        return evaluate<double>(kind_, params_, y.sigma2, y.u2);
    }

    static std::size_t parameter_count(BaseKind kind);

    template <class T>
    static T evaluate(BaseKind kind, std::span<const T> p, double sigma2, double u2);

private:
    BaseKind kind_;
    std::vector<double> params_;
};

/// Deterministic per seed. GARCH: omega, alpha ~ U(-0.1, 0.1), beta ~ U(0.3, 0.9).
/// FNN: weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases 0.
BaseModel init_model(BaseKind kind, std::uint64_t seed);

template <class T>
T BaseModel::evaluate(BaseKind kind, std::span<const T> p, double sigma2, double u2) {
    if (kind == BaseKind::Garch) {
        return p[0] + p[1] * u2 + p[2] * sigma2;
    }
    const auto hidden = hidden_layers(kind);
    std::size_t offset = 0;
    // first layer consumes plain inputs
    std::array<T, kMaxHiddenWidth> act{};
    for (std::size_t k = 0; k < hidden.front(); ++k) {
        const T* w = &p[offset + 2 * k];
        T z = w[0] * sigma2;
        z = z + w[1] * u2;
        z = z + p[offset + 2 * hidden.front() + k];
        act[k] = ad::tanh(z);
    }
    offset += 2 * hidden.front() + hidden.front();
    for (std::size_t l = 1; l <= hidden.size(); ++l) {
        const std::size_t in = hidden[l - 1];
        const std::size_t out = l < hidden.size() ? hidden[l] : 1;
        std::array<T, kMaxHiddenWidth> next{};
        for (std::size_t k = 0; k < out; ++k) {
            const T* w = &p[offset + in * k];
            T z = w[0] * act[0];
            for (std::size_t j = 1; j < in; ++j) {
                z = z + w[j] * act[j];
            }
            z = z + p[offset + in * out + k];
            next[k] = l < hidden.size() ? ad::tanh(z) : z;
        }
        offset += in * out + out;
        act = next;
    }
    return act[0];
}

}  // namespace pmcvol::models
