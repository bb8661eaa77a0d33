// Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

#include "oracles.hpp"

#include "cli.hpp"
#include "pmcvol/data/prices.hpp"
#include "pmcvol/hmc/hmc_model.hpp"
#include "pmcvol/io/json_io.hpp"
#include "pmcvol/pmc/explicit_pmc.hpp"
#include "pmcvol/synth/regime_garch.hpp"
#include "pmcvol/train/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

using namespace pmcvol;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::vector<double> random_stochastic(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> m(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            s += m[r * cols + c] = u(rng);
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m[r * cols + c] /= s;
        }
    }
    return m;
}

double max_abs_diff(const std::vector<pmc::FilteredPosterior>& a, const std::vector<pmc::FilteredPosterior>& b) {
    double worst = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        for (std::size_t i = 0; i < a[t].size(); ++i) {
            worst = std::max(worst, std::abs(a[t][i] - b[t][i]));
        }
    }
    return worst;
}

const std::vector<models::BaseKind> kBaseKinds{models::BaseKind::Garch, models::BaseKind::Fnn2, models::BaseKind::Fnn3,
                                               models::BaseKind::Fnn23};

Outcome oracle_equivalence() {
    const auto start = Clock::now();
    double worst_rec = 0.0;
    double worst_fwd = 0.0;
    std::size_t instances = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t n = 2 + seed % 2;
        const std::size_t m = 2 + seed % 3;
        const std::size_t t = 2 + seed % 7;
        const auto model = pmc::random_explicit_pmc(n, m, 7000 + seed);
        std::mt19937_64 rng(seed);
        std::vector<std::size_t> ys(t);
        for (auto& y : ys) {
            y = rng() % m;
        }
        const auto enumerated = pmc::brute_force_posterior(model, ys);
        worst_rec = std::max(worst_rec, max_abs_diff(pmc::recursion_posterior(model, ys), enumerated));
        worst_fwd = std::max(worst_fwd, max_abs_diff(pmc::forward_recursion_posterior(model, ys), enumerated));
        ++instances;
    }
    const double elapsed = seconds_since(start);
    return {instances >= 50 && worst_rec <= 1e-10 && worst_fwd <= 1e-12 && elapsed < 10.0,
            std::to_string(instances) + " instances, max err " + fmt(worst_rec) + " (recursion), " + fmt(worst_fwd) +
                " (enumeration vs forward recursion), " + fmt(elapsed) + " s"};
}

Outcome hmc_correctness() {
    const auto start = Clock::now();
    double worst = 0.0;
    std::size_t instances = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(9000 + seed);
        const std::size_t n = 2 + seed % 3, m = 2 + seed % 4;
        hmc::ExplicitHmm hmm{n, m, random_stochastic(1, n, rng), random_stochastic(n, n, rng),
                             random_stochastic(n, m, rng)};
        std::vector<std::size_t> ys(50);
        for (auto& y : ys) {
            y = rng() % m;
        }
        const auto got = hmc::hmm_delta_posteriors(hmm, ys);
        const auto ref = oracle::hmm_forward(hmm.pi, hmm.a, hmm.b, n, m, ys);
        for (std::size_t t = 0; t < ys.size(); ++t) {
            for (std::size_t x = 0; x < n; ++x) {
                worst = std::max(worst, std::abs(got[t][x] - ref[t][x]));
            }
        }
        ++instances;
    }
    const double elapsed = seconds_since(start);
    return {instances >= 50 && worst <= 1e-10 && elapsed < 5.0,
            std::to_string(instances) + " instances, max err " + fmt(worst) + ", " + fmt(elapsed) + " s"};
}

Outcome reduction() {
    const auto prices = oracle::random_prices(60 * 200 + 1, 3);
    const auto ds = data::build_dataset(prices);
    const auto seg = [&](data::IndexRange r) {
        return std::span<const data::FeaturePair>(ds.features.normalized).subspan(r.begin, r.size());
    };
    train::TrainConfig config;
    double worst = 0.0;
    for (auto kind : kBaseKinds) {
        const std::string base(models::to_string(kind));
        const auto plain_spec = train::parse_model_spec(base, 1, "");
        const auto pmc_spec = train::parse_model_spec("pmc", 1, base);
        for (std::uint64_t seed : {0u, 1u}) {
            const auto plain0 = train::Forecaster::init(plain_spec, seed);
            const auto pmc0 = train::Forecaster::init(pmc_spec, seed);
            const auto a = plain0.filter(ds.features.normalized).predictions;
            const auto b = pmc0.filter(ds.features.normalized).predictions;
            for (std::size_t t = 0; t < a.size(); ++t) {
                worst = std::max(worst, std::abs(a[t] - b[t]));
            }
            config.seed = seed;
            const auto ra = train::train(plain0, seg(ds.bounds.train), seg(ds.bounds.val), config);
            const auto rb = train::train(pmc0, seg(ds.bounds.train), seg(ds.bounds.val), config);
            if (ra.train_loss.size() != rb.train_loss.size() || ra.best_epoch != rb.best_epoch) {
                return {false, base + ": training trajectories have different lengths"};
            }
            for (std::size_t e = 0; e < ra.train_loss.size(); ++e) {
                worst = std::max({worst, std::abs(ra.train_loss[e] - rb.train_loss[e]),
                                  std::abs(ra.val_mse[e] - rb.val_mse[e])});
            }
            const auto pa = ra.model.flatten();
            const auto pb = rb.model.flatten();
            for (std::size_t i = 0; i < pa.size(); ++i) {
                worst = std::max(worst, std::abs(pa[i] - pb[i]));
            }
            const auto fa = ra.model.filter(ds.features.normalized).predictions;
            const auto fb = rb.model.filter(ds.features.normalized).predictions;
            for (std::size_t t = 0; t < fa.size(); ++t) {
                worst = std::max(worst, std::abs(fa[t] - fb[t]));
            }
        }
    }
    return {worst <= 1e-12, "4 base kinds x 2 seeds, 300 epochs; max deviation " + fmt(worst)};
}

Outcome gradient_integrity() {
    std::vector<train::ModelSpec> specs;
    for (auto kind : kBaseKinds) {
        const std::string base(models::to_string(kind));
        specs.push_back(train::parse_model_spec(base, 1, ""));
        specs.push_back(train::parse_model_spec("pmc", 2, base));
        specs.push_back(train::parse_model_spec("pmc", 3, base));
    }
    specs.push_back(train::parse_model_spec("hmc", 2, ""));
    specs.push_back(train::parse_model_spec("hmc", 3, ""));
    specs.push_back(train::parse_model_spec("hmc", 2, "", true));

    std::size_t checked = 0;
    std::size_t failed = 0;
    std::string first_failure;
    for (const auto& spec : specs) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto ys = oracle::random_features(12, 100 + seed);
            const auto model = train::Forecaster::init(spec, seed);
            const auto p0 = model.flatten();
            ad::Tape tape;
            const auto lg = train::loss_and_gradient(model, p0, ys, tape);
            const auto fd = oracle::finite_difference(
                [&](const std::vector<double>& p) { return train::sequence_sse<double>(model, p, ys); }, p0);
            for (std::size_t i = 0; i < p0.size(); ++i) {
                ++checked;
                if (!oracle::gradient_close(lg.gradient[i], fd[i])) {
                    ++failed;
                    if (first_failure.empty()) {
                        first_failure = "; first failure " + spec.label() + " seed " + std::to_string(seed) +
                                        " param " + std::to_string(i) + ": " + fmt(lg.gradient[i]) + " vs " +
                                        fmt(fd[i]);
                    }
                }
            }
        }
    }
    return {failed == 0, std::to_string(specs.size()) + " model configurations x 10 seeds, " +
                             std::to_string(checked) + " parameter gradients, " + std::to_string(failed) +
                             " outside tolerance" + first_failure};
}

Outcome normalization_stability() {
    const auto ys = oracle::random_features(10000, 77);
    double worst = 0.0;
    bool finite = true;
    std::size_t models_run = 0;
    std::vector<train::ModelSpec> specs;
    for (auto kind : kBaseKinds) {
        specs.push_back(train::parse_model_spec("pmc", 2, std::string(models::to_string(kind))));
        specs.push_back(train::parse_model_spec("pmc", 4, std::string(models::to_string(kind))));
    }
    specs.push_back(train::parse_model_spec("hmc", 2, ""));
    specs.push_back(train::parse_model_spec("hmc", 4, ""));
    for (const auto& spec : specs) {
        const auto trace = train::Forecaster::init(spec, 5).filter(ys);
        for (const auto& p : trace.posteriors) {
            double s = 0.0;
            for (double v : p) {
                finite = finite && std::isfinite(v) && v >= 0.0;
                s += v;
            }
            worst = std::max(worst, std::abs(s - 1.0));
        }
        for (double v : trace.predictions) {
            finite = finite && std::isfinite(v);
        }
        ++models_run;
    }
    return {finite && worst <= 1e-9, std::to_string(models_run) + " models over 10000 steps, max |sum - 1| " +
                                         fmt(worst) + (finite ? ", all finite" : ", NONFINITE values")};
}

Outcome synthetic_benchmark() {
    const auto start = Clock::now();
    const auto spec = synth::default_benchmark_spec();
    const auto series = synth::generate(spec, synth::kBenchmarkHours);
    const auto dataset = data::build_dataset(data::open_prices(series.prices));
    train::TrainConfig config;
    const auto garch = train::run_experiment(dataset, train::parse_model_spec("garch", 1, ""), config, 5);
    const auto pmc = train::run_experiment(dataset, train::parse_model_spec("pmc", 2, "garch"), config, 5);

    std::vector<double> agreement;
    for (const auto& run : pmc.runs) {
        const auto trace = run.training.model.filter(dataset.features.normalized);
        std::vector<std::size_t> path;
        for (const auto& p : trace.posteriors) {
            path.push_back(static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin()));
        }
        agreement.push_back(oracle::two_state_agreement(path, series.regimes));
    }
    const double mean_agreement = std::accumulate(agreement.begin(), agreement.end(), 0.0) / 5.0;
    const double elapsed = seconds_since(start);
    const bool mse_ok = pmc.normalized.mean < garch.normalized.mean;
    const bool agreement_ok = mean_agreement >= 0.70;
    std::string per_seed;
    for (double a : agreement) {
        per_seed += (per_seed.empty() ? "" : "/") + fmt(std::round(a * 1000.0) / 1000.0);
    }
    return {mse_ok && agreement_ok && elapsed <= 600.0,
            std::string("test MSE PMC(2)-GARCH ") + fmt(pmc.normalized.mean) + " vs GARCH " +
                fmt(garch.normalized.mean) + (mse_ok ? " (lower: ok)" : " (NOT lower)") +
                "; regime agreement mean " + fmt(mean_agreement) + " per seed " + per_seed +
                (agreement_ok ? " (ok)" : " (below 0.70)") + "; " + fmt(elapsed) + " s"};
}

Outcome protocol_fidelity(const fs::path& root) {
    fs::remove_all(root);
    fs::create_directories(root);
    // A user-style price file with ISO timestamps and one gap.
    const std::size_t n_prices = 60 * 150 + 37;
    const auto opens = oracle::random_prices(n_prices, 2024, 2e-3);
    {
        std::ofstream f(root / "prices.csv");
        f << "timestamp,open\n";
        std::int64_t minute = 28000000;
        for (std::size_t i = 0; i < n_prices; ++i) {
            minute += i == 500 ? 3 : 1;
            const std::time_t secs = static_cast<std::time_t>(minute * 60);
            std::tm tm{};
            gmtime_r(&secs, &tm);
            char buf[32];
            std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
            f << buf << ',' << opens[i] << '\n';
        }
    }
    std::ostringstream out;
    std::ostringstream err;
    if (cli::run_cli({"features", (root / "prices.csv").string(), (root / "features").string()}, out, err) != 0 ||
        cli::run_cli({"train", (root / "features" / "features.csv").string(), "--out", (root / "train").string(),
                      "--model", "pmc", "--N", "2", "--base", "garch", "--epochs", "40"},
                     out, err) != 0) {
        return {false, "end-to-end run failed: " + err.str()};
    }
    const auto man = io::read_json_file(root / "train" / "manifest.json");
    const auto report = io::read_json_file(root / "train" / "report.json");
    const auto& proto = man["protocol"];
    std::vector<std::string> problems;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) {
            problems.push_back(what);
        }
    };

    const std::size_t t_samples = (n_prices - 1) / 60;
    auto range = [](std::size_t b, std::size_t e) { return io::Json{{"begin", b}, {"end", e}}; };
    expect(proto["window"] == 60, "window is not 60");
    expect(proto["window_source"] == "sidecar", "window not taken from the features sidecar");
    const auto& split = proto["split"];
    expect(split["train_frac"] == 0.4 && split["val_frac"] == 0.4 && split["test_frac"] == 0.2,
           "split fractions are not 0.4/0.4/0.2");
    const auto n_train = static_cast<std::size_t>(std::floor(0.4 * static_cast<double>(t_samples)));
    expect(split["train"] == range(0, n_train), "train bounds");
    expect(split["val"] == range(n_train, 2 * n_train), "val bounds");
    expect(split["test"] == range(2 * n_train, t_samples), "test bounds");
    expect(proto["normalization"]["fit"] == range(0, n_train), "normalization not fit on train");
    expect(proto["optimizer"] == "adam" && proto["learning_rate"] == 0.05, "optimizer is not Adam with lr 0.05");
    expect(proto["n_seeds"] == 5 && man["seeds"].size() == 5 && report["runs"].size() == 5, "not 5 seeds");
    expect(proto["ci"] == "gaussian-95" && proto["ci_z"] == 1.96, "CI is not Gaussian 95%");

    for (const char* scale : {"normalized", "original"}) {
        std::vector<double> v;
        for (const auto& r : report["runs"]) {
            v.push_back(r[std::string("test_mse_") + scale].get<double>());
        }
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / 5.0;
        double ss = 0.0;
        for (double x : v) {
            ss += (x - mean) * (x - mean);
        }
        const double half = 1.96 * std::sqrt(ss / 4.0) / std::sqrt(5.0);
        const auto& summary = report["summary"][scale];
        expect(std::abs(summary["mean"].get<double>() - mean) <= 1e-12 * std::max(1.0, mean),
               std::string(scale) + " mean mismatch");
        expect(std::abs(summary["ci_half_width"].get<double>() - half) <= 1e-12 * std::max(1.0, half),
               std::string(scale) + " CI half-width is not 1.96 sd / sqrt(5)");
    }

    // Normalization stored in the manifest must equal statistics recomputed from the train split alone.
    const auto loaded = data::read_price_csv(root / "prices.csv");
    const auto raw = data::make_features(data::open_prices(loaded.prices), 60);
    expect(raw.size() == t_samples, "feature count is not floor((len - 1) / 60)");
    double mu = 0.0;
    for (std::size_t t = 0; t < n_train; ++t) {
        mu += std::log(std::max(raw.samples[t].sigma2, 1e-12));
    }
    mu /= static_cast<double>(n_train);
    expect(std::abs(proto["normalization"]["sigma2"]["mean"].get<double>() - mu) <= 1e-12 * std::abs(mu),
           "normalization mean differs from the train-only recomputation");

    std::string detail = "features " + std::to_string(t_samples) + ", split " + std::to_string(n_train) + "/" +
                         std::to_string(n_train) + "/" + std::to_string(t_samples - 2 * n_train) +
                         ", Adam lr 0.05, 5 seeds, CI 1.96 sd/sqrt(5)";
    for (const auto& p : problems) {
        detail += "; " + p;
    }
    return {problems.empty(), detail};
}

Outcome arithmetic_spot_checks() {
    const double a = models::garch_forecast({-0.0155, 0.1674, 0.7221}, 1.0, 1.0);
    const double b = models::garch_forecast({0.1730, 0.0161, 0.6508}, 1.0, 1.0);
    const double ea = std::abs(a - 0.8740);
    const double eb = std::abs(b - 0.8399);
    return {ea <= 1e-12 && eb <= 1e-12, "0.8740 -> " + fmt(a) + ", 0.8399 -> " + fmt(b)};
}

}  // namespace

int main() {
    const fs::path scratch(PMCVOL_TEST_DATA_DIR);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"HMC correctness", hmc_correctness},
        {"N=1 reduction", reduction},
        {"gradient integrity", gradient_integrity},
        {"normalization stability", normalization_stability},
        {"synthetic regime benchmark", synthetic_benchmark},
        {"protocol fidelity", [&] { return protocol_fidelity(scratch / "protocol"); }},
        {"arithmetic spot checks", arithmetic_spot_checks},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::cout << "criterion " << i + 1 << " [" << criteria[i].first << "]: " << (o.pass ? "PASS" : "FAIL")
                  << " - " << o.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
