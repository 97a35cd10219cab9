#pragma once

#include <string>

#include "qkdcoex/calibrate.hpp"
#include "qkdcoex/scenario.hpp"

namespace qkdcoex {

// Parses a scenario config (JSON, // comments allowed). Unknown keys are
// hard errors carrying the full field path. `source` names the input in
// error messages.
ScenarioConfig parse_config_text(const std::string& text, const std::string& source = "config");
ScenarioConfig load_config(const std::string& path);

// Serializes with every defaulted field materialized, so
// serialize(parse(file)) is a fixed point.
std::string serialize_config(const ScenarioConfig& config);

// Overlays a fitted-parameter file (protocol/detector/raman blocks, any
// subset of keys) onto an existing config.
void apply_params_text(ScenarioConfig& config, const std::string& text,
                       const std::string& source = "params");
void apply_params_file(ScenarioConfig& config, const std::string& path);

// Writes the protocol/detector/raman blocks of a fitted parameter set,
// annotated with the anchors it was fitted against.
std::string serialize_params(const ParamSet& params, const std::vector<Anchor>& anchors);

}  // namespace qkdcoex
