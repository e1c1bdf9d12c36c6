#pragma once

#include <cstdint>
#include <string>

#include "engine/engine.hpp"
#include "gmoe/model.hpp"
#include "gmoe/train.hpp"
#include "synth/script.hpp"

namespace liftrisk {

// Everything tunable from a config file, grouped by concern. Every field
// has a working default; a config file only overrides what it names.
struct AppConfig {
  std::uint64_t seed = 7;
  int lifts = 60;
  LiftScript script;
  ScriptRanges ranges;
  GmoeDims dims;
  TrainConfig training;
  EngineSettings engine;
};

AppConfig default_app_config();

// Strict parser: unknown keys anywhere are an error, as are values of the
// wrong type or enum spellings that do not exist. Throws std::runtime_error.
AppConfig app_config_from_json(const std::string& text);
AppConfig load_app_config(const std::string& path);

// Serializes the full configuration, suitable as a starting template.
std::string app_config_to_json(const AppConfig& config);

}  // namespace liftrisk
