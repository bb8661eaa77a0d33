#include "oracles.hpp"

#include "cli.hpp"
#include "pmcvol/data/prices.hpp"
#include "pmcvol/io/digest.hpp"
#include "pmcvol/io/feature_csv.hpp"
#include "pmcvol/io/json_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pmcvol;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path(PMCVOL_TEST_DATA_DIR) / "cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path write_prices(const fs::path& dir, std::size_t n, std::uint64_t seed) {
    const auto opens = oracle::random_prices(n, seed);
    data::PriceSeries s;
    for (std::size_t i = 0; i < n; ++i) {
        s.push_back({static_cast<std::int64_t>(27000000 + i), opens[i]});
    }
    const auto path = dir / "prices.csv";
    std::ofstream f(path);
    data::write_price_csv(f, s);
    return path;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("input errors exit with code 2 and name the problem") {
    const auto dir = scratch("errors");
    {
        std::ofstream f(dir / "unsorted.csv");
        f << "timestamp,open\n120,1.0\n180,1.1\n60,1.2\n";
    }
    auto r = run({"features", (dir / "unsorted.csv").string(), (dir / "out").string()});
    CHECK(r.code == cli::kExitInput);
    CHECK(r.err.find("line 4") != std::string::npos);

    r = run({"features", (dir / "missing.csv").string(), (dir / "out").string()});
    CHECK(r.code == cli::kExitInput);

    r = run({"frobnicate"});
    CHECK(r.code == cli::kExitInput);

    const auto prices = write_prices(dir, 60 * 30 + 1, 1);
    REQUIRE(run({"features", prices.string(), (dir / "feat").string()}).code == 0);
    const auto features = (dir / "feat" / "features.csv").string();
    CHECK(run({"train", features, "--out", (dir / "t").string(), "--model", "lstm"}).code == cli::kExitInput);
    CHECK(run({"train", features, "--out", (dir / "t").string(), "--model", "garch", "--N", "2"}).code ==
          cli::kExitInput);
    CHECK(run({"train", features, "--out", (dir / "t").string(), "--model", "pmc", "--N", "0"}).code ==
          cli::kExitInput);
    CHECK(run({"train", features, "--out", (dir / "t").string(), "--model", "garch", "--epochs", "0"}).code ==
          cli::kExitInput);
    CHECK(run({"train", features, "--out", (dir / "t").string()}).code == cli::kExitInput);
}

TEST_CASE("features command output and gap warnings") {
    const auto dir = scratch("features");
    {
        std::ofstream f(dir / "gappy.csv");
        f << "timestamp,open\n";
        const auto opens = oracle::random_prices(60 * 12 + 1, 3);
        std::int64_t minute = 1000;
        for (std::size_t i = 0; i < opens.size(); ++i) {
            minute += (i == 100 || i == 400) ? 5 : 1;
            f << minute * 60 << ',' << opens[i] << '\n';
        }
    }
    const auto r = run({"features", (dir / "gappy.csv").string(), (dir / "out").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("gap warnings: 2") != std::string::npos);
    const auto side = io::read_json_file(dir / "out" / "features.json");
    CHECK(side["window"] == 60);
    CHECK(side["n_samples"] == 12);
    CHECK(side["gap_warnings"] == 2);
    CHECK(side["normalization"]["log_transform"] == true);
    CHECK(io::read_features_csv(dir / "out" / "features.csv").size() == 12);
    const auto man = io::read_json_file(dir / "out" / "manifest.json");
    CHECK(man["command"] == "features");
    CHECK(man["inputs"][0]["sha256"] == io::sha256_file(dir / "gappy.csv"));
}

TEST_CASE("train writes models, report and a protocol manifest; report emits normalized posteriors") {
    const auto dir = scratch("train");
    const auto prices = write_prices(dir, 60 * 60 + 1, 7);
    REQUIRE(run({"features", prices.string(), (dir / "feat").string()}).code == 0);
    const auto features = (dir / "feat" / "features.csv").string();
    const auto r = run({"train", features, "--out", (dir / "pmc").string(), "--model", "pmc", "--N", "2", "--base",
                        "garch", "--seeds", "2", "--epochs", "5", "--instrument", "SYN"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("PMC(2)-GARCH(1,1)") != std::string::npos);

    const auto report = io::read_json_file(dir / "pmc" / "report.json");
    CHECK(report["format"] == "pmcvol-report");
    CHECK(report["runs"].size() == 2);
    CHECK(report["summary"]["ci"] == "gaussian-95");
    const auto man = io::read_json_file(dir / "pmc" / "manifest.json");
    CHECK(man["protocol"]["window"] == 60);
    CHECK(man["protocol"]["optimizer"] == "adam");
    CHECK(man["protocol"]["learning_rate"] == 0.05);
    CHECK(man["protocol"]["patience"] == 5);
    CHECK(man["seeds"] == io::Json::array({0, 1}));
    for (const auto& a : man["artifacts"]) {
        CHECK(a["sha256"] == io::sha256_file(dir / "pmc" / a["path"].get<std::string>()));
    }
    CHECK(fs::exists(dir / "pmc" / "report.md"));

    const auto traj = dir / "traj.csv";
    REQUIRE(run({"report", (dir / "pmc" / "models" / "seed_0.json").string(), features, "--out", traj.string()}).code == 0);
    std::ifstream f(traj);
    std::string line;
    std::getline(f, line);
    CHECK(line == "t,pred,state0,state1,argmax");
    std::size_t rows = 0;
    while (std::getline(f, line)) {
        std::vector<double> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(std::stod(cell));
        }
        REQUIRE(cells.size() == 5);
        CHECK(cells[0] == static_cast<double>(rows));
        CHECK(std::abs(cells[2] + cells[3] - 1.0) <= 1e-9);
        CHECK(cells[4] == (cells[3] > cells[2] ? 1.0 : 0.0));
        ++rows;
    }
    CHECK(rows == 60);
}

TEST_CASE("PMC with one state reports exactly what the plain base model reports") {
    const auto dir = scratch("reduction");
    const auto prices = write_prices(dir, 60 * 50 + 1, 9);
    REQUIRE(run({"features", prices.string(), (dir / "feat").string()}).code == 0);
    const auto features = (dir / "feat" / "features.csv").string();
    REQUIRE(run({"train", features, "--out", (dir / "g").string(), "--model", "garch", "--seeds", "2", "--epochs", "20"}).code == 0);
    REQUIRE(run({"train", features, "--out", (dir / "p").string(), "--model", "pmc", "--N", "1", "--seeds", "2",
                 "--epochs", "20"}).code == 0);
    const auto g = io::read_json_file(dir / "g" / "report.json");
    const auto p = io::read_json_file(dir / "p" / "report.json");
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::abs(g["runs"][i]["test_mse_normalized"].get<double>() -
                       p["runs"][i]["test_mse_normalized"].get<double>()) <= 1e-12);
    }
}

TEST_CASE("synth is deterministic and honors the regime spec file") {
    const auto dir = scratch("synth");
    REQUIRE(run({"synth", "--default-benchmark", (dir / "a").string(), "--hours", "30"}).code == 0);
    REQUIRE(run({"synth", "--default-benchmark", (dir / "b").string(), "--hours", "30"}).code == 0);
    CHECK(io::sha256_file(dir / "a" / "prices.csv") == io::sha256_file(dir / "b" / "prices.csv"));
    CHECK(slurp(dir / "a" / "manifest.json") == slurp(dir / "b" / "manifest.json"));
    CHECK(data::read_price_csv(dir / "a" / "prices.csv").prices.size() == 30 * 60 + 1);

    auto spec = io::regime_spec_to_json(synth::default_benchmark_spec(3));
    spec["transition"] = io::Json::array({io::Json::array({1.0, 0.0}), io::Json::array({0.0, 1.0})});
    spec["initial_regime"] = 1;
    io::write_json_file(dir / "spec.json", spec);
    REQUIRE(run({"synth", (dir / "spec.json").string(), (dir / "c").string(), "--hours", "40"}).code == 0);
    std::ifstream f(dir / "c" / "regimes.csv");
    std::string line;
    std::getline(f, line);
    CHECK(line == "hour,regime,variance");
    std::size_t n = 0;
    while (std::getline(f, line)) {
        CHECK(line.substr(line.find(',') + 1, 2) == "1,");
        ++n;
    }
    CHECK(n == 40);

    spec["transition"][0][0] = 0.3;
    io::write_json_file(dir / "bad.json", spec);
    CHECK(run({"synth", (dir / "bad.json").string(), (dir / "d").string()}).code == cli::kExitInput);
}

TEST_CASE("re-running a command reproduces its manifest byte for byte") {
    const auto dir = scratch("idempotent");
    const auto prices = write_prices(dir, 60 * 30 + 1, 2);
    REQUIRE(run({"features", prices.string(), (dir / "f").string()}).code == 0);
    const auto features = (dir / "f" / "features.csv").string();
    REQUIRE(run({"train", features, "--out", (dir / "t").string(), "--model", "hmc", "--seeds", "2", "--epochs", "3"}).code == 0);
    const auto first_features = slurp(dir / "f" / "manifest.json");
    const auto first_train = slurp(dir / "t" / "manifest.json");
    REQUIRE(run({"features", prices.string(), (dir / "f").string()}).code == 0);
    REQUIRE(run({"train", features, "--out", (dir / "t").string(), "--model", "hmc", "--seeds", "2", "--epochs", "3"}).code == 0);
    CHECK(slurp(dir / "f" / "manifest.json") == first_features);
    CHECK(slurp(dir / "t" / "manifest.json") == first_train);
}

TEST_CASE("compare renders reports into tables") {
    const auto dir = scratch("compare");
    const auto prices = write_prices(dir, 60 * 30 + 1, 4);
    REQUIRE(run({"features", prices.string(), (dir / "f").string()}).code == 0);
    const auto features = (dir / "f" / "features.csv").string();
    REQUIRE(run({"train", features, "--out", (dir / "a").string(), "--model", "garch", "--seeds", "2", "--epochs", "3", "--instrument", "X"}).code == 0);
    REQUIRE(run({"train", features, "--out", (dir / "b").string(), "--model", "hmc", "--seeds", "2", "--epochs", "3", "--instrument", "X"}).code == 0);
    const auto r = run({"compare", (dir / "a" / "report.json").string(), (dir / "b" / "report.json").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("| Model | X |") != std::string::npos);
    CHECK(r.out.find("HMC(2)") != std::string::npos);
}

}  // TEST_SUITE
