#include "cli.hpp"

#include "pmcvol/ad/adam.hpp"
#include "pmcvol/data/prices.hpp"
#include "pmcvol/errors.hpp"
#include "pmcvol/io/digest.hpp"
#include "pmcvol/io/feature_csv.hpp"
#include "pmcvol/io/json_io.hpp"
#include "pmcvol/io/number_format.hpp"
#include "pmcvol/io/report_table.hpp"
#include "pmcvol/synth/regime_garch.hpp"
#include "pmcvol/train/experiment.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

namespace pmcvol::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

/// Reproducibility record written next to every command's outputs. Holds no timestamps, so
/// re-running a command with identical inputs yields an identical manifest.
struct Manifest {
    std::string command;
    Json config;
    std::vector<fs::path> inputs;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> artifacts;  // relative to the output directory
    Json protocol = Json::object();
};

void write_manifest(const fs::path& dir, const Manifest& m) {
    Json inputs = Json::array();
    for (const auto& p : m.inputs) {
        inputs.push_back(Json{{"path", p.string()}, {"sha256", io::sha256_file(p)}});
    }
    Json artifacts = Json::array();
    for (const auto& a : m.artifacts) {
        artifacts.push_back(Json{{"path", a}, {"sha256", io::sha256_file(dir / a)}});
    }
    const Json j{{"tool", io::kToolName},
                 {"version", io::kToolVersion},
                 {"command", m.command},
                 {"config", m.config},
                 {"config_sha256", io::sha256_hex(m.config.dump())},
                 {"inputs", inputs},
                 {"seeds", m.seeds},
                 {"artifacts", artifacts},
                 {"protocol", m.protocol}};
    io::write_json_file(dir / "manifest.json", j);
}

data::SplitSpec parse_split(const std::string& text) {
    std::vector<double> v;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        v.push_back(io::parse_double(
            std::string_view(text).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    if (v.size() != 3) {
        throw ConfigError("--split expects three fractions, e.g. 0.4,0.4,0.2");
    }
    data::SplitSpec s{v[0], v[1], v[2]};
    s.validate();
    return s;
}

Json split_to_json(const data::SplitSpec& s) { return Json::array({s.train_frac, s.val_frac, s.test_frac}); }

data::SplitSpec split_from_json(const Json& j) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 3) {
        throw ConfigError("split expects three fractions");
    }
    data::SplitSpec s{v[0], v[1], v[2]};
    s.validate();
    return s;
}

/// Window recorded by the features command next to a feature file, if any.
std::optional<std::size_t> sidecar_window(const fs::path& features_csv) {
    auto sidecar = features_csv;
    sidecar.replace_extension(".json");
    if (!fs::exists(sidecar)) {
        return std::nullopt;
    }
    return io::read_json_file(sidecar).at("window").get<std::size_t>();
}

// ---------------------------------------------------------------- features

struct FeaturesArgs {
    std::string prices;
    std::string out_dir;
    std::size_t window = data::kDefaultWindow;
    std::string split = "0.4,0.4,0.2";
};

int cmd_features(const FeaturesArgs& a, std::ostream& out) {
    const auto split = parse_split(a.split);
    const auto loaded = data::read_price_csv(fs::path(a.prices));
    const auto dataset = data::build_dataset(data::open_prices(loaded.prices), a.window, split);

    const fs::path dir(a.out_dir);
    fs::create_directories(dir);
    {
        auto f = open_output(dir / "features.csv");
        io::write_features_csv(f, dataset.features);
    }
    Json sidecar = io::dataset_sidecar(dataset);
    sidecar["n_prices"] = loaded.prices.size();
    sidecar["gap_warnings"] = loaded.gap_warnings;
    io::write_json_file(dir / "features.json", sidecar);

    Manifest m;
    m.command = "features";
    m.config = Json{{"window", a.window}, {"split", split_to_json(split)}};
    m.inputs = {fs::path(a.prices)};
    m.artifacts = {"features.csv", "features.json"};
    m.protocol = Json{{"window", a.window}, {"split", sidecar["split"]}};
    write_manifest(dir, m);

    out << "features: " << dataset.features.size() << " rows from " << loaded.prices.size() << " prices\n";
    out << "gap warnings: " << loaded.gap_warnings << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
    std::string features;
    std::string out_dir;
    std::optional<std::string> config;
    std::optional<std::string> model;
    std::optional<std::size_t> n_states;
    std::optional<std::string> base;
    std::optional<std::size_t> seeds;
    std::optional<std::size_t> epochs;
    std::optional<double> learning_rate;
    std::optional<std::size_t> patience;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> instrument;
    std::optional<std::string> split;
    bool constant_heads = false;
};

template <class T>
T pick(const std::optional<T>& flag, const Json& config, const char* key, T fallback) {
    if (flag) {
        return *flag;
    }
    if (config.contains(key)) {
        return config.at(key).get<T>();
    }
    return fallback;
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
    Json file_config = Json::object();
    if (a.config) {
        file_config = io::read_json_file(*a.config);
        if (!file_config.is_object()) {
            throw ConfigError("training config must be a JSON object");
        }
    }
    Json resolved;
    try {
        const auto model = pick<std::string>(a.model, file_config, "model", "");
        if (model.empty()) {
            throw ConfigError("--model is required (garch|fnn2|fnn3|fnn23|hmc|pmc)");
        }
        const bool mixture = model == "pmc" || model == "hmc";
        const auto epochs = pick<std::size_t>(a.epochs, file_config, "epochs", 300);
        resolved = Json{
            {"model", model},
            {"N", pick<std::size_t>(a.n_states, file_config, "N", mixture ? 2 : 1)},
            {"base", pick<std::string>(a.base, file_config, "base", "garch")},
            {"hmc_constant_heads", a.constant_heads || file_config.value("hmc_constant_heads", false)},
            {"seeds", pick<std::size_t>(a.seeds, file_config, "seeds", 5)},
            {"epochs", epochs},
            {"learning_rate", pick<double>(a.learning_rate, file_config, "learning_rate", 0.05)},
            {"patience", pick<std::size_t>(a.patience, file_config, "patience", std::min<std::size_t>(50, epochs))},
            {"seed", pick<std::uint64_t>(a.seed, file_config, "seed", 0)},
            {"instrument", pick<std::string>(a.instrument, file_config, "instrument", "")},
            {"split", a.split ? split_to_json(parse_split(*a.split))
                              : split_to_json(file_config.contains("split") ? split_from_json(file_config["split"])
                                                                            : data::SplitSpec{})}};
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("training config: ") + e.what());
    }

    const auto spec = train::parse_model_spec(resolved["model"].get<std::string>(), resolved["N"].get<std::size_t>(),
                                              resolved["base"].get<std::string>(),
                                              resolved["hmc_constant_heads"].get<bool>());
    train::TrainConfig config;
    config.epochs = resolved["epochs"];
    config.learning_rate = resolved["learning_rate"];
    config.patience = resolved["patience"];
    config.seed = resolved["seed"];
    config.validate();
    const std::size_t n_seeds = resolved["seeds"];
    if (n_seeds == 0) {
        throw ConfigError("--seeds must be at least 1");
    }
    const auto split = split_from_json(resolved["split"]);

    const fs::path features_path(a.features);
    auto samples = io::read_features_csv(features_path);
    const auto window = sidecar_window(features_path);
    const auto dataset = data::dataset_from_samples(std::move(samples), window.value_or(data::kDefaultWindow), split);

    const auto report = train::run_experiment(dataset, spec, config, n_seeds, resolved["instrument"]);

    const fs::path dir(a.out_dir);
    fs::create_directories(dir / "models");
    Manifest m;
    m.command = "train";
    m.config = resolved;
    m.inputs = {features_path};
    for (const auto& run : report.runs) {
        const std::string name = "models/seed_" + std::to_string(run.seed) + ".json";
        io::write_json_file(dir / name, io::model_to_json(run.training.model));
        m.artifacts.push_back(name);
        m.seeds.push_back(run.seed);
    }
    const Json report_json = io::report_to_json(report);
    io::write_json_file(dir / "report.json", report_json);
    {
        const std::vector<io::ReportRow> rows{io::report_row(report_json)};
        auto f = open_output(dir / "report.md");
        f << io::markdown_tables(rows);
    }
    m.artifacts.push_back("report.json");
    m.artifacts.push_back("report.md");

    const ad::AdamConfig adam{config.learning_rate};
    Json sidecar = io::dataset_sidecar(dataset);
    m.protocol = Json{{"window", dataset.window},
                      {"window_source", window ? "sidecar" : "default"},
                      {"split", sidecar["split"]},
                      {"normalization", sidecar["normalization"]},
                      {"optimizer", "adam"},
                      {"learning_rate", adam.learning_rate},
                      {"adam", {{"beta1", adam.beta1}, {"beta2", adam.beta2}, {"epsilon", adam.epsilon}}},
                      {"epochs", config.epochs},
                      {"patience", config.patience},
                      {"selection", "best-validation-epoch"},
                      {"n_seeds", n_seeds},
                      {"ci", "gaussian-95"},
                      {"ci_z", train::kGaussian95}};
    write_manifest(dir, m);

    out << report.spec.label() << ": test MSE " << io::format_double(report.normalized.mean);
    if (report.normalized.ci_half_width) {
        out << " +/- " << io::format_double(*report.normalized.ci_half_width);
    }
    out << " (normalized), " << io::format_double(report.original.mean) << " (original scale), " << n_seeds
        << " seeds\n";
    return kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
    std::string model;
    std::string features;
    std::string out;
    std::string split = "0.4,0.4,0.2";
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
    const auto model = io::model_from_json(io::read_json_file(a.model));
    const fs::path features_path(a.features);
    auto samples = io::read_features_csv(features_path);
    const auto dataset = data::dataset_from_samples(std::move(samples), data::kDefaultWindow, parse_split(a.split));
    // a repeated final observation lets the filter emit the forecast made at the last step;
    // it only affects the posterior after that step, which is dropped
    auto ys = dataset.features.normalized;
    ys.push_back(ys.back());
    auto trace = model.filter(ys);
    trace.posteriors.pop_back();
    if (trace.posteriors.empty()) {
        trace.posteriors.assign(trace.predictions.size(), std::vector<double>{1.0});
    }
    const fs::path out_path(a.out);
    if (out_path.has_parent_path()) {
        fs::create_directories(out_path.parent_path());
    }
    auto f = open_output(out_path);
    io::write_trajectory_csv(f, trace.predictions, trace.posteriors);
    out << "trajectory: " << trace.predictions.size() << " rows, " << model.n_states() << " states\n";
    return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::vector<std::string> positional;
    bool default_benchmark = false;
    std::optional<std::size_t> hours;
    std::optional<std::size_t> minutes;
    std::optional<std::uint64_t> seed;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    const std::size_t expected = a.default_benchmark ? 1 : 2;
    if (a.positional.size() != expected) {
        throw ConfigError(a.default_benchmark ? "usage: synth --default-benchmark <out_dir>"
                                              : "usage: synth <spec.json> <out_dir>");
    }
    synth::RegimeSpec spec;
    Json file = Json::object();
    std::vector<fs::path> inputs;
    if (a.default_benchmark) {
        spec = synth::default_benchmark_spec();
    } else {
        inputs.emplace_back(a.positional[0]);
        file = io::read_json_file(inputs.back());
        spec = io::regime_spec_from_json(file);
    }
    if (a.seed) {
        spec.seed = *a.seed;
    }
    const std::size_t hours = a.hours.value_or(file.value("hours", synth::kBenchmarkHours));
    const std::size_t minutes = a.minutes.value_or(file.value("minutes_per_hour", std::size_t{60}));
    const auto series = synth::generate(spec, hours, minutes);

    const fs::path dir(a.positional.back());
    fs::create_directories(dir);
    {
        auto f = open_output(dir / "prices.csv");
        data::write_price_csv(f, series.prices);
    }
    {
        auto f = open_output(dir / "regimes.csv");
        f << "hour,regime,variance\n";
        for (std::size_t t = 0; t < hours; ++t) {
            f << t << ',' << series.regimes[t] << ',' << io::format_double(series.variances[t]) << '\n';
        }
    }
    Json resolved = io::regime_spec_to_json(spec);
    resolved["hours"] = hours;
    resolved["minutes_per_hour"] = minutes;
    io::write_json_file(dir / "spec.json", resolved);

    Manifest m;
    m.command = "synth";
    m.config = resolved;
    m.inputs = inputs;
    m.seeds = {spec.seed};
    m.artifacts = {"prices.csv", "regimes.csv", "spec.json"};
    write_manifest(dir, m);
    out << "synth: " << hours << " hours, " << series.prices.size() << " prices, " << spec.n_regimes()
        << " regimes\n";
    return kExitOk;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
    std::vector<std::string> reports;
    std::optional<std::string> out;
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
    std::vector<io::ReportRow> rows;
    for (const auto& r : a.reports) {
        rows.push_back(io::report_row(io::read_json_file(r)));
    }
    const auto md = io::markdown_tables(rows);
    if (a.out) {
        auto f = open_output(*a.out);
        f << md;
    } else {
        out << md;
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pairwise Markov chain volatility forecasting", "pmcvol"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(io::kToolVersion));

    FeaturesArgs fa;
    auto* features = app.add_subcommand("features", "Compute hourly features from 1-minute prices");
    features->add_option("prices", fa.prices, "CSV with header timestamp,open")->required();
    features->add_option("out_dir", fa.out_dir, "Output directory")->required();
    features->add_option("--window", fa.window, "Minutes per feature window")->check(CLI::PositiveNumber);
    features->add_option("--split", fa.split, "train,val,test fractions for normalization");

    TrainArgs ta;
    auto* trainc = app.add_subcommand("train", "Train and evaluate a model over several seeds");
    trainc->add_option("features", ta.features, "features.csv from the features command")->required();
    trainc->add_option("--out", ta.out_dir, "Output directory")->required();
    trainc->add_option("--config", ta.config, "JSON config; flags override it");
    trainc->add_option("--model", ta.model, "garch|fnn2|fnn3|fnn23|hmc|pmc");
    trainc->add_option("--N", ta.n_states, "Number of hidden states (pmc, hmc)");
    trainc->add_option("--base", ta.base, "Base model of a pmc: garch|fnn2|fnn3|fnn23");
    trainc->add_option("--seeds", ta.seeds, "Number of seeds (default 5)");
    trainc->add_option("--seed", ta.seed, "First seed (default 0)");
    trainc->add_option("--epochs", ta.epochs, "Epochs (default 300)");
    trainc->add_option("--lr", ta.learning_rate, "Adam learning rate (default 0.05)");
    trainc->add_option("--patience", ta.patience, "Early-stopping patience (default min(50, epochs))");
    trainc->add_option("--instrument", ta.instrument, "Column name used in report tables");
    trainc->add_option("--split", ta.split, "train,val,test fractions (default 0.4,0.4,0.2)");
    trainc->add_flag("--hmc-constant-heads", ta.constant_heads, "HMC heads are per-state constants");

    ReportArgs ra;
    auto* report = app.add_subcommand("report", "Export the posterior trajectory of a trained model");
    report->add_option("model", ra.model, "Model JSON")->required();
    report->add_option("features", ra.features, "features.csv")->required();
    report->add_option("--out", ra.out, "Output CSV")->required();
    report->add_option("--split", ra.split, "Split used to fit the normalization (default 0.4,0.4,0.2)");

    SynthArgs sa;
    auto* synthc = app.add_subcommand("synth", "Generate a regime-switching GARCH price series");
    synthc->add_option("args", sa.positional, "[spec.json] out_dir")->required();
    synthc->add_flag("--default-benchmark", sa.default_benchmark, "Use the built-in two-regime benchmark");
    synthc->add_option("--hours", sa.hours, "Hours to simulate (default 6000)")->check(CLI::PositiveNumber);
    synthc->add_option("--minutes", sa.minutes, "Minutes per hour (default 60)")->check(CLI::PositiveNumber);
    synthc->add_option("--seed", sa.seed, "Override the seed of the regime spec");

    CompareArgs ca;
    auto* compare = app.add_subcommand("compare", "Markdown comparison table from report files");
    compare->add_option("reports", ca.reports, "report.json files")->required();
    compare->add_option("--out", ca.out, "Output markdown file (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (features->parsed()) {
            return cmd_features(fa, out);
        }
        if (trainc->parsed()) {
            return cmd_train(ta, out);
        }
        if (report->parsed()) {
            return cmd_report(ra, out);
        }
        if (synthc->parsed()) {
            return cmd_synth(sa, out);
        }
        return cmd_compare(ca, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const DegenerateData& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace pmcvol::cli
