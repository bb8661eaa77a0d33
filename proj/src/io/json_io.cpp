#include "pmcvol/io/json_io.hpp"

#include "pmcvol/errors.hpp"

#include <fstream>

namespace pmcvol::io {

namespace {

Json net_to_json(const pmc::StatePairNet& net) {
    const auto p = net.parameters();
    return Json{{"obs_width", net.obs_width()},
                {"hidden_width", net.hidden_width()},
                {"parameters", std::vector<double>(p.begin(), p.end())}};
}

pmc::StatePairNet net_from_json(const Json& j, std::size_t n_states) {
    return {n_states, j.at("obs_width").get<std::size_t>(), j.at("parameters").get<std::vector<double>>()};
}

Json summary_to_json(const train::ScoreSummary& s) {
    Json j{{"mean", s.mean}, {"sd", s.sd}};
    j["ci_half_width"] = s.ci_half_width ? Json(*s.ci_half_width) : Json(nullptr);
    j["min"] = s.min;
    j["max"] = s.max;
    return j;
}

std::optional<double> optional_number(const Json& j) {
    if (j.is_null()) {
        return std::nullopt;
    }
    return j.get<double>();
}

Json range_to_json(const data::IndexRange& r) { return Json{{"begin", r.begin}, {"end", r.end}}; }

template <class F>
auto translate_errors(const char* what, F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string(what) + ": " + e.what());
    }
}

}  // namespace

Json spec_to_json(const train::ModelSpec& spec) {
    return Json{{"family", train::to_string(spec.family)},
                {"base", models::to_string(spec.base)},
                {"n_states", spec.n_states},
                {"hmc_constant_heads", spec.hmc_constant_heads},
                {"label", spec.label()}};
}

Json model_to_json(const train::Forecaster& model) {
    const auto spec = model.spec();
    Json j{{"format", "pmcvol-model"}, {"version", 1}, {"family", train::to_string(spec.family)},
           {"label", spec.label()}};
    if (const auto* b = std::get_if<models::BaseModel>(&model.model())) {
        j["base"] = models::to_string(b->kind());
        j["parameters"] = std::vector<double>(b->parameters().begin(), b->parameters().end());
    } else if (const auto* p = std::get_if<pmc::PmcModel>(&model.model())) {
        j["base"] = models::to_string(p->base_kind());
        j["n_states"] = p->n_states();
        Json experts = Json::array();
        for (const auto& e : p->experts()) {
            experts.push_back(std::vector<double>(e.parameters().begin(), e.parameters().end()));
        }
        j["experts"] = experts;
        j["weight_net"] = net_to_json(p->weight_net().network());
        j["initial_logits"] = std::vector<double>(p->initial_logits().begin(), p->initial_logits().end());
    } else {
        const auto& h = std::get<hmc::HmcModel>(model.model());
        j["n_states"] = h.n_states();
        j["constant_heads"] = h.constant_heads();
        Json heads = Json::array();
        for (const auto& head : h.heads()) {
            heads.push_back(Json{{"intercept", head.intercept}, {"w_sigma2", head.w_sigma2}, {"w_u2", head.w_u2}});
        }
        j["heads"] = heads;
        j["delta_net"] = net_to_json(h.delta_net().network());
        j["initial_logits"] = std::vector<double>(h.initial_logits().begin(), h.initial_logits().end());
    }
    return j;
}

train::Forecaster model_from_json(const Json& j) {
    return translate_errors("model document", [&]() -> train::Forecaster {
        if (j.value("format", "") != "pmcvol-model") {
            throw InvalidInput("not a pmcvol model document");
        }
        const auto family = j.at("family").get<std::string>();
        try {
            if (family == "plain") {
                return train::Forecaster(models::BaseModel(models::parse_base_kind(j.at("base").get<std::string>()),
                                                           j.at("parameters").get<std::vector<double>>()));
            }
            const auto n = j.at("n_states").get<std::size_t>();
            if (family == "pmc") {
                const auto kind = models::parse_base_kind(j.at("base").get<std::string>());
                std::vector<models::BaseModel> experts;
                for (const auto& e : j.at("experts")) {
                    experts.emplace_back(kind, e.get<std::vector<double>>());
                }
                return train::Forecaster(pmc::PmcModel(std::move(experts),
                                                       pmc::TransitionWeightNet(net_from_json(j.at("weight_net"), n)),
                                                       j.at("initial_logits").get<std::vector<double>>()));
            }
            if (family == "hmc") {
                std::vector<hmc::AffineHead> heads;
                for (const auto& h : j.at("heads")) {
                    heads.push_back({h.at("intercept").get<double>(), h.at("w_sigma2").get<double>(),
                                     h.at("w_u2").get<double>()});
                }
                return train::Forecaster(hmc::HmcModel(std::move(heads),
                                                       hmc::DeltaWeightNet(net_from_json(j.at("delta_net"), n)),
                                                       j.at("initial_logits").get<std::vector<double>>(),
                                                       j.at("constant_heads").get<bool>()));
            }
        } catch (const ConfigError& e) {
            throw InvalidInput(std::string("model document: ") + e.what());
        }
        throw InvalidInput("unknown model family '" + family + "'");
    });
}

Json dataset_sidecar(const data::Dataset& dataset) {
    if (!dataset.features.norm) {
        throw InvalidInput("dataset is not normalized");
    }
    const auto& n = *dataset.features.norm;
    return Json{
        {"window", dataset.window},
        {"n_samples", dataset.features.size()},
        {"normalization",
         {{"log_transform", n.log_transform},
          {"floor", n.floor},
          {"sigma2", {{"mean", n.sigma2.mean}, {"scale", n.sigma2.scale}}},
          {"u60sq", {{"mean", n.u60sq.mean}, {"scale", n.u60sq.scale}}},
          {"fit", range_to_json(n.fit)}}},
        {"split",
         {{"train_frac", dataset.split_spec.train_frac},
          {"val_frac", dataset.split_spec.val_frac},
          {"test_frac", dataset.split_spec.test_frac},
          {"train", range_to_json(dataset.bounds.train)},
          {"val", range_to_json(dataset.bounds.val)},
          {"test", range_to_json(dataset.bounds.test)}}}};
}

Json report_to_json(const train::ExperimentReport& report) {
    Json runs = Json::array();
    std::vector<std::uint64_t> seeds;
    for (const auto& r : report.runs) {
        seeds.push_back(r.seed);
        runs.push_back(Json{{"seed", r.seed},
                            {"test_mse_normalized", r.test.mse_normalized},
                            {"test_mse_original", r.test.mse_original},
                            {"n_test_targets", r.test.n_targets},
                            {"best_epoch", r.training.best_epoch},
                            {"epochs_run", r.training.val_mse.size()},
                            {"best_val_mse", r.training.best_val_mse}});
    }
    return Json{{"format", "pmcvol-report"},
                {"model", report.spec.label()},
                {"spec", spec_to_json(report.spec)},
                {"instrument", report.instrument},
                {"training",
                 {{"epochs", report.config.epochs},
                  {"learning_rate", report.config.learning_rate},
                  {"patience", report.config.patience},
                  {"optimizer", "adam"},
                  {"first_seed", report.config.seed}}},
                {"seeds", seeds},
                {"runs", runs},
                {"summary",
                 {{"normalized", summary_to_json(report.normalized)},
                  {"original", summary_to_json(report.original)},
                  {"ci", "gaussian-95"}}}};
}

ReportRow report_row(const Json& report) {
    return translate_errors("report document", [&] {
        if (report.value("format", "") != "pmcvol-report") {
            throw InvalidInput("not a pmcvol report document");
        }
        const auto& spec = report.at("spec");
        ReportRow row;
        row.label = report.at("model").get<std::string>();
        row.block = spec.at("family").get<std::string>() == "hmc" ? "hmc" : spec.at("base").get<std::string>();
        row.instrument = report.at("instrument").get<std::string>();
        const auto& s = report.at("summary");
        row.normalized_mean = s.at("normalized").at("mean").get<double>();
        row.normalized_ci = optional_number(s.at("normalized").at("ci_half_width"));
        row.original_mean = s.at("original").at("mean").get<double>();
        row.original_ci = optional_number(s.at("original").at("ci_half_width"));
        return row;
    });
}

synth::RegimeSpec regime_spec_from_json(const Json& j) {
    return translate_errors("regime spec", [&] {
        synth::RegimeSpec spec;
        for (const auto& r : j.at("regimes")) {
            spec.regimes.push_back({r.at("omega").get<double>(), r.at("alpha").get<double>(),
                                    r.at("beta").get<double>()});
        }
        for (const auto& row : j.at("transition")) {
            const auto v = row.get<std::vector<double>>();
            if (v.size() != spec.regimes.size()) {
                throw ConfigError("transition row length must equal the number of regimes");
            }
            spec.transition.insert(spec.transition.end(), v.begin(), v.end());
        }
        spec.seed = j.value("seed", spec.seed);
        spec.initial_regime = j.value("initial_regime", spec.initial_regime);
        spec.initial_price = j.value("initial_price", spec.initial_price);
        spec.start_minute = j.value("start_minute", spec.start_minute);
        spec.validate();
        return spec;
    });
}

Json regime_spec_to_json(const synth::RegimeSpec& spec) {
    Json regimes = Json::array();
    for (const auto& g : spec.regimes) {
        regimes.push_back(Json{{"omega", g.omega}, {"alpha", g.alpha}, {"beta", g.beta}});
    }
    Json transition = Json::array();
    const std::size_t k = spec.n_regimes();
    for (std::size_t i = 0; i < k; ++i) {
        transition.push_back(std::vector<double>(spec.transition.begin() + static_cast<std::ptrdiff_t>(i * k),
                                                 spec.transition.begin() + static_cast<std::ptrdiff_t>((i + 1) * k)));
    }
    return Json{{"regimes", regimes},           {"transition", transition},
                {"seed", spec.seed},             {"initial_regime", spec.initial_regime},
                {"initial_price", spec.initial_price}, {"start_minute", spec.start_minute}};
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

}  // namespace pmcvol::io
