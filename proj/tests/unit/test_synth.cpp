#include "pmcvol/data/features.hpp"
#include "pmcvol/synth/regime_garch.hpp"

#include <doctest.h>

#include <cmath>

using namespace pmcvol;
using namespace pmcvol::synth;

TEST_SUITE("synth") {

TEST_CASE("spec validation") {
    auto spec = default_benchmark_spec();
    CHECK_NOTHROW(spec.validate());
    CHECK(spec.n_regimes() == 2);
    spec.regimes[1].alpha = 0.3;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec = default_benchmark_spec();
    spec.transition[0] = 0.5;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec = default_benchmark_spec();
    spec.initial_regime = 2;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec = default_benchmark_spec();
    spec.regimes[0].omega = 0.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    CHECK(unconditional_variance({1e-6, 0.05, 0.90}) == doctest::Approx(2e-5));
}

TEST_CASE("output shape and price path") {
    const auto s = generate(default_benchmark_spec(3), 50, 60);
    CHECK(s.prices.size() == 50 * 60 + 1);
    CHECK(s.regimes.size() == 50);
    CHECK(s.variances.size() == 50);
    CHECK(s.hourly_returns.size() == 50);
    CHECK(s.prices.front().open == 100.0);
    for (std::size_t i = 1; i < s.prices.size(); ++i) {
        CHECK(s.prices[i].timestamp == s.prices[i - 1].timestamp + 1);
        CHECK(s.prices[i].open > 0.0);
    }
    for (std::size_t h = 0; h < 50; ++h) {
        const double r = std::log(s.prices[60 * (h + 1)].open / s.prices[60 * h].open);
        CHECK(std::abs(r - s.hourly_returns[h]) <= 1e-12);
    }
    CHECK(s.variances[0] == unconditional_variance(default_benchmark_spec().regimes[0]));
}

TEST_CASE("same seed gives identical series; a different seed does not") {
    const auto a = generate(default_benchmark_spec(11), 200);
    const auto b = generate(default_benchmark_spec(11), 200);
    const auto c = generate(default_benchmark_spec(12), 200);
    REQUIRE(a.prices.size() == b.prices.size());
    bool all_same = true;
    bool any_diff = false;
    for (std::size_t i = 0; i < a.prices.size(); ++i) {
        all_same = all_same && a.prices[i].open == b.prices[i].open;
        any_diff = any_diff || a.prices[i].open != c.prices[i].open;
    }
    CHECK(all_same);
    CHECK(any_diff);
    CHECK(a.regimes == b.regimes);
}

TEST_CASE("identity transitions keep the starting regime") {
    auto spec = default_benchmark_spec(5);
    spec.transition = {1.0, 0.0, 0.0, 1.0};
    for (std::size_t k : {0u, 1u}) {
        spec.initial_regime = k;
        const auto s = generate(spec, 500);
        for (auto r : s.regimes) {
            CHECK(r == k);
        }
    }
}

TEST_CASE("a single regime matches its unconditional variance") {
    RegimeSpec spec{{{1e-6, 0.05, 0.90}}, {1.0}, 2};
    const auto s = generate(spec, 20000);
    double ss = 0.0;
    for (double r : s.hourly_returns) {
        ss += r * r;
    }
    const double sample = ss / static_cast<double>(s.hourly_returns.size());
    CHECK(std::abs(sample / unconditional_variance(spec.regimes[0]) - 1.0) < 0.10);
}

TEST_CASE("regime occupancy converges to the stationary law") {
    const auto spec = default_benchmark_spec(21);
    const auto pi = spec.stationary();
    CHECK(std::abs(pi[0] - 0.5) <= 1e-12);

    auto skewed = spec;
    skewed.transition = {0.97, 0.03, 0.01, 0.99};
    const auto sp = skewed.stationary();
    CHECK(std::abs(sp[0] - 0.25) <= 1e-9);

    for (const RegimeSpec* s : {&spec, static_cast<const RegimeSpec*>(&skewed)}) {
        const auto series = generate(*s, 6000);
        double in_b = 0.0;
        for (auto r : series.regimes) {
            in_b += static_cast<double>(r == 1);
        }
        const double freq = in_b / 6000.0;
        const double p = s->stationary()[1];
        // Two-state chain: lag-one correlation of the indicator is 1 - p01 - p10.
        const double rho = 1.0 - s->transition[1] - s->transition[2];
        const double se = std::sqrt(p * (1.0 - p) / 6000.0 * (1.0 + rho) / (1.0 - rho));
        INFO("freq " << freq << " expected " << p << " se " << se);
        CHECK(std::abs(freq - p) <= 3.0 * se);
    }
}

TEST_CASE("the feature pipeline recovers the simulated hourly variances") {
    const auto s = generate(default_benchmark_spec(7), kBenchmarkHours);
    std::vector<double> opens;
    for (const auto& p : s.prices) {
        opens.push_back(p.open);
    }
    const auto f = data::make_features(opens, 60);
    REQUIRE(f.size() == kBenchmarkHours);
    double ratio = 0.0;
    double window = 0.0;
    for (std::size_t t = 0; t < f.size(); ++t) {
        // hv^2 estimates h_t / 60 from 60 i.i.d. minute returns.
        ratio += f.samples[t].sigma2 * f.samples[t].sigma2 * 60.0 / s.variances[t];
        window += f.samples[t].u60sq / s.variances[t];
        CHECK(std::abs(std::sqrt(f.samples[t].u60sq) - std::abs(s.hourly_returns[t])) <= 1e-12);
    }
    ratio /= static_cast<double>(f.size());
    window /= static_cast<double>(f.size());
    CHECK(std::abs(ratio - 1.0) < 0.01);
    CHECK(std::abs(window - 1.0) < 0.06);
}

}  // TEST_SUITE
