// Copyright 2026 The lrmac Authors.
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

#include <string>

#include "lrmac/channel.hpp"
#include "lrmac/harness.hpp"
#include "lrmac/solver.hpp"

namespace lrmac {

// Config files are JSON objects whose keys are the field names of
// ScenarioConfig, SolverOptions and ExperimentSpec. Unknown keys are errors.
ScenarioConfig parse_scenario_config(const std::string& json_text);
ExperimentSpec parse_experiment_spec(const std::string& json_text);
ExperimentSpec load_experiment_spec(const std::string& path);

std::string to_json(const ExperimentSpec& spec);

}  // namespace lrmac
