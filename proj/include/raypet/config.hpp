#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "raypet/classifiers.hpp"
#include "raypet/eval.hpp"
#include "raypet/preprocess.hpp"
#include "raypet/radar.hpp"
#include "raypet/synth.hpp"

namespace raypet {

// Everything a CLI run needs, one JSON section per module.
struct RunConfig {
  radar::RadarConfig radar;
  radar::ValidationOptions radar_validation;
  synth::SceneConfig scene;
  synth::AnimalModel animal;
  synth::NoiseModel noise = synth::default_noise();
  synth::DatasetSpec dataset;
  double background_duration_s = 1.0;
  preprocess::PipelineConfig pipeline;
  classifiers::ClassifierConfig classifier;
  eval::SplitSpec split;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
};

nlohmann::json to_json(const RunConfig& config);

// Keys missing from j keep their defaults. Unknown keys and wrongly typed
// values throw ConfigError naming the key path.
RunConfig run_config_from_json(const nlohmann::json& j);

// Applies "section.key=value" (nested paths allowed) to a JSON config. The
// value is parsed as JSON when possible, otherwise taken as a string.
void apply_override(nlohmann::json& config, std::string_view assignment);

// Violations of every section, each prefixed with its section name.
std::vector<std::string> validate(const RunConfig& config);

RunConfig load_run_config(const std::filesystem::path& path);

// Pipeline config as written into dataset headers and reports.
nlohmann::json pipeline_to_json(const preprocess::PipelineConfig& config);
preprocess::PipelineConfig pipeline_from_json(const nlohmann::json& j);
nlohmann::json classifier_to_json(const classifiers::ClassifierConfig& config);
classifiers::ClassifierConfig classifier_from_json(const nlohmann::json& j);

}  // namespace raypet
