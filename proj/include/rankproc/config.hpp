#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "rankproc/analysis.hpp"
#include "rankproc/distribution.hpp"
#include "rankproc/process.hpp"
#include "rankproc/ranking.hpp"
#include "rankproc/simulate.hpp"
#include "rankproc/stats.hpp"

// JSON and CSV formats for configs and reports. Rankings and component
// indices are 1-based everywhere in these formats.
namespace rankproc::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const Ranking& r);
Ranking ranking_from_json(const Json& j);

/// {"d": 2, "atoms": [{"v": [1, 0], "p": 0.5}, ...]}. "d" may be omitted
/// when `expected_dimension` is given; if present it must agree.
Json to_json(const DiscreteVectorDistribution& dist);
DiscreteVectorDistribution distribution_from_json(const Json& j,
                                                  std::optional<int> expected_dimension = {});

/// Builds a process from a config object with "schema_version": 1 and
/// "model" one of "table", "additive_urn", "click". Throws ConfigError on
/// schema problems and InputError on invalid model parameters.
ProcessSpec process_from_json(const Json& config);

/// Reads and parses a config file. Throws ConfigError with code
/// CONFIG_NOT_FOUND or CONFIG_PARSE_ERROR.
Json read_json_file(const std::filesystem::path& path);
ProcessSpec load_process_config(const std::filesystem::path& path);

/// Table-form config equivalent to `spec`. Sampler laws are rejected.
Json process_to_json(const ProcessSpec& spec);

Json to_json(const AnalysisReport& report, const ProcessSpec& spec);

Json to_json(const EnsembleSummary& summary);
EnsembleSummary ensemble_from_json(const Json& j);
/// One row per run: run_index, settled ranking or "U", last_change_step,
/// then the components of X_N.
std::string to_csv(const EnsembleSummary& summary);

Json to_json(const LimitLawReport& report);
Json to_json(const Estimate& e);

}  // namespace rankproc::io
