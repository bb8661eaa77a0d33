#pragma once

#include "pmcvol/data/features.hpp"
#include "pmcvol/synth/regime_garch.hpp"
#include "pmcvol/train/experiment.hpp"
#include "pmcvol/train/forecaster.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace pmcvol::io {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolName = "pmcvol";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// {"format":"pmcvol-model","family":...,"label":...} plus family-specific parameters.
Json model_to_json(const train::Forecaster& model);
/// Throws InvalidInput on a malformed document or inconsistent dimensions.
train::Forecaster model_from_json(const Json& j);

Json spec_to_json(const train::ModelSpec& spec);

/// Normalization parameters, split fractions and boundaries, window and sample count.
Json dataset_sidecar(const data::Dataset& dataset);

/// Per-seed scores on both scales, summaries, spec and training configuration.
Json report_to_json(const train::ExperimentReport& report);

/// One row of a comparison table, read back from a report document.
struct ReportRow {
    std::string label;
    std::string block;
    std::string instrument;
    double normalized_mean = 0.0;
    std::optional<double> normalized_ci;
    double original_mean = 0.0;
    std::optional<double> original_ci;
};

ReportRow report_row(const Json& report);

/// {"regimes":[{"omega","alpha","beta"}...],"transition":[[...]...],"seed","initial_regime",
///  "initial_price","start_minute"}; missing optional keys take RegimeSpec defaults.
synth::RegimeSpec regime_spec_from_json(const Json& j);
Json regime_spec_to_json(const synth::RegimeSpec& spec);

/// Parses a file; throws InvalidInput naming the file on I/O or syntax errors.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace pmcvol::io
