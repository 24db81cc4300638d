// Copyright 2026 The mafsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mafsim/simulation.hpp"

namespace mafsim {

// A named, fully validated simulation setup. `provenance` tags each config
// key as "reference" (part of the scenario's reference definition) or
// "tuned" (calibrated default of this implementation) so runs are auditable.
struct Scenario {
  std::string name;
  std::string description;
  SimConfig config;
  std::map<std::string, std::string> provenance;
  std::vector<std::string> warnings;  // soft issues noticed while loading
};

std::vector<std::string> builtin_scenario_names();

// triangle | square | hexagon. Throws UnknownScenario otherwise.
Scenario builtin_scenario(const std::string& name);

// Parses a scenario object, filling documented defaults for omitted fields
// and validating every invariant. Throws ParseError for malformed or
// mistyped input, ValidationError (or a more specific code) otherwise.
Scenario scenario_from_json(const nlohmann::json& j);

// Full round-trippable form: every field explicit, defaults included.
nlohmann::json scenario_to_json(const Scenario& s);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

// Sets a dotted key ("control.epsilon", "srm.enabled", ...) in a raw config
// object. The value string is parsed as JSON when possible, else kept as a
// string.
void apply_override(nlohmann::json& config, const std::string& dotted_key,
                    const std::string& value);

bool operator==(const Scenario& a, const Scenario& b);

}  // namespace mafsim
