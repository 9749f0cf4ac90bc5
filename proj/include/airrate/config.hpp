// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#pragma once

#include <string>

#include "airrate/harness.hpp"

namespace airrate {

// Scenario files are JSON; every field is optional and falls back to the
// built-in default. Unknown keys are a configuration error.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& json_text);
std::string scenario_to_json(const ScenarioConfig& cfg);

} // namespace airrate
