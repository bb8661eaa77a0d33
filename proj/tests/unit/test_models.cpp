#include "oracles.hpp"

#include "pmcvol/models/base_model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pmcvol;
using namespace pmcvol::models;

namespace {

double one_step_mse(BaseKind kind, std::span<const double> p, const std::vector<FeaturePair>& ys) {
    double acc = 0.0;
    for (std::size_t t = 0; t + 1 < ys.size(); ++t) {
        const double e = BaseModel::evaluate<double>(kind, p, ys[t].sigma2, ys[t].u2) - ys[t + 1].sigma2;
        acc += e * e;
    }
    return acc / static_cast<double>(ys.size() - 1);
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("GARCH forecasts reproduce the reported parameter arithmetic") {
    CHECK(std::abs(garch_forecast({-0.0155, 0.1674, 0.7221}, 1.0, 1.0) - 0.8740) <= 1e-12);
    CHECK(std::abs(garch_forecast({0.1730, 0.0161, 0.6508}, 1.0, 1.0) - 0.8399) <= 1e-12);
    CHECK(std::abs(garch_forecast({-0.3346, -0.0432, 0.4853}, 1.0, 1.0) - 0.1075) <= 1e-12);
    CHECK(garch_forecast({0.0, 0.0, 1.0}, 0.37, 9.0) == 0.37);
    const auto m = BaseModel::from_garch({0.1, 0.2, 0.3});
    CHECK(m({2.0, 5.0}) == garch_forecast({0.1, 0.2, 0.3}, 2.0, 5.0));
}

TEST_CASE("GARCH is affine in each input") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const GarchParams p{u(rng), u(rng), u(rng)};
        const double s1 = u(rng), s2 = u(rng), v1 = u(rng), v2 = u(rng);
        const double lhs = garch_forecast(p, s1 + s2, v1 + v2) + garch_forecast(p, 0.0, 0.0);
        const double rhs = garch_forecast(p, s1, v1) + garch_forecast(p, s2, v2);
        CHECK(std::abs(lhs - rhs) <= 1e-14);
    }
}

TEST_CASE("FNN evaluation") {
    for (BaseKind kind : {BaseKind::Fnn2, BaseKind::Fnn3, BaseKind::Fnn23}) {
        std::vector<double> zeros(BaseModel::parameter_count(kind), 0.0);
        const BaseModel zero(kind, zeros);
        CHECK(zero({1.3, -2.0}) == 0.0);
        zeros.back() = 0.75;
        CHECK(BaseModel(kind, zeros)({5.0, 6.0}) == 0.75);
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (BaseKind kind : {BaseKind::Fnn2, BaseKind::Fnn3, BaseKind::Fnn23}) {
            auto params = init_model(kind, seed).fnn();
            std::mt19937_64 rng(seed);
            std::normal_distribution<double> g(0.0, 1.0);
            for (auto& layer : params.layers) {
                for (auto& b : layer.bias) {
                    b = g(rng);
                }
            }
            const auto m = BaseModel::from_fnn(params);
            const double x = g(rng), y = g(rng);
            CHECK(std::abs(m({x, y}) - oracle::dense_fnn(params, x, y)) <= 1e-14);
            CHECK(fnn_forward(params, x, y) == m({x, y}));
        }
    }
}

TEST_CASE("FNN output is not bounded by a final activation") {
    auto params = init_model(BaseKind::Fnn2, 3).fnn();
    const double base = std::abs(fnn_forward(params, 1.0, 1.0));
    for (auto& w : params.layers.back().weights) {
        w *= 1000.0;
    }
    CHECK(std::abs(fnn_forward(params, 1.0, 1.0)) > 100.0 * base);
    CHECK(std::abs(fnn_forward(params, 1.0, 1.0)) > 1.0);
}

TEST_CASE("initialization is deterministic with the documented shapes and ranges") {
    for (BaseKind kind : {BaseKind::Garch, BaseKind::Fnn2, BaseKind::Fnn3, BaseKind::Fnn23}) {
        const auto a = init_model(kind, 11);
        const auto b = init_model(kind, 11);
        const auto c = init_model(kind, 12);
        CHECK(std::vector<double>(a.parameters().begin(), a.parameters().end()) ==
              std::vector<double>(b.parameters().begin(), b.parameters().end()));
        CHECK(std::vector<double>(a.parameters().begin(), a.parameters().end()) !=
              std::vector<double>(c.parameters().begin(), c.parameters().end()));
    }
    const auto f = init_model(BaseKind::Fnn2, 0).fnn();
    REQUIRE(f.layers.size() == 2);
    CHECK(f.layers[0].out == 2);
    CHECK(f.layers[0].in == 2);
    CHECK(f.layers[1].out == 1);
    CHECK(f.layers[1].in == 2);
    for (const auto& layer : f.layers) {
        for (double w : layer.weights) {
            CHECK(std::abs(w) <= 1.0 / std::sqrt(static_cast<double>(layer.in)));
        }
        for (double b : layer.bias) {
            CHECK(b == 0.0);
        }
    }
    CHECK(init_model(BaseKind::Fnn23, 0).fnn().layers.size() == 3);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto g = init_model(BaseKind::Garch, s).garch();
        CHECK(std::abs(g.omega) <= 0.1);
        CHECK(std::abs(g.alpha) <= 0.1);
        CHECK(g.beta >= 0.3);
        CHECK(g.beta <= 0.9);
    }
    CHECK(BaseModel::parameter_count(BaseKind::Garch) == 3);
    CHECK(BaseModel::parameter_count(BaseKind::Fnn2) == 9);
    CHECK(BaseModel::parameter_count(BaseKind::Fnn3) == 13);
    CHECK(BaseModel::parameter_count(BaseKind::Fnn23) == 25);
}

TEST_CASE("kind names parse and invalid shapes are rejected") {
    CHECK(parse_base_kind("fnn23") == BaseKind::Fnn23);
    CHECK(to_string(BaseKind::Garch) == "garch");
    CHECK_THROWS_AS(parse_base_kind("lstm"), ConfigError);
    CHECK_THROWS(BaseModel(BaseKind::Garch, {1.0, 2.0}));
    auto bad = init_model(BaseKind::Fnn3, 1).fnn();
    bad.layers[0].weights.pop_back();
    CHECK_THROWS(bad.validate());
}

TEST_CASE("one-step MSE gradients match finite differences for every base kind") {
    const auto ys = oracle::random_features(12, 8);
    for (BaseKind kind : {BaseKind::Garch, BaseKind::Fnn2, BaseKind::Fnn3, BaseKind::Fnn23}) {
        const auto model = init_model(kind, 21);
        const std::vector<double> p0(model.parameters().begin(), model.parameters().end());
        ad::Tape tape;
        std::vector<ad::Var> leaves;
        for (double v : p0) {
            leaves.push_back(tape.variable(v));
        }
        ad::Var acc = tape.constant(0.0);
        for (std::size_t t = 0; t + 1 < ys.size(); ++t) {
            acc = acc + ad::square(BaseModel::evaluate<ad::Var>(kind, leaves, ys[t].sigma2, ys[t].u2) -
                                   ys[t + 1].sigma2);
        }
        const ad::Var loss = acc / static_cast<double>(ys.size() - 1);
        CHECK(std::abs(loss.value() - one_step_mse(kind, p0, ys)) <= 1e-13);
        const auto adj = tape.backward(loss);
        const auto fd = oracle::finite_difference([&](const std::vector<double>& p) { return one_step_mse(kind, p, ys); }, p0);
        for (std::size_t i = 0; i < p0.size(); ++i) {
            INFO(to_string(kind) << " parameter " << i);
            CHECK(oracle::gradient_close(adj[static_cast<std::size_t>(leaves[i].id())], fd[i]));
        }
    }
}

}  // TEST_SUITE
