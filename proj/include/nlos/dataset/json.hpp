#pragma once

// nlohmann::json conversions for configuration and provenance types.

#include "nlos/dataset/preprocess.hpp"
#include "nlos/scenario/scenario.hpp"

#include <json.hpp>

namespace nlos::scenario {
void to_json(nlohmann::json& j, const ScenarioConfig& cfg);
void from_json(const nlohmann::json& j, ScenarioConfig& cfg);
void to_json(nlohmann::json& j, const CaptureProvenance& p);
void from_json(const nlohmann::json& j, CaptureProvenance& p);
}  // namespace nlos::scenario

namespace nlos::dataset {
void to_json(nlohmann::json& j, const PreprocessConfig& cfg);
void from_json(const nlohmann::json& j, PreprocessConfig& cfg);
}  // namespace nlos::dataset
