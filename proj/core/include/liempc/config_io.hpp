// Copyright 2026 The liempc Authors
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

#ifndef LIEMPC_CONFIG_IO_HPP_
#define LIEMPC_CONFIG_IO_HPP_

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "liempc/harness.hpp"
#include "liempc/vessel.hpp"

namespace liempc {

// Unknown keys are rejected so that typos do not silently fall back to
// defaults. Relative paths resolve against base_dir.
VesselParams vessel_params_from_json(const nlohmann::json& j);
nlohmann::json vessel_params_to_json(const VesselParams& p);
VesselParams load_vessel_params(const std::filesystem::path& path);

DisturbanceSpec disturbance_from_json(const nlohmann::json& j);
MpcConfig mpc_config_from_json(const nlohmann::json& j, Scenario* scenario);
PidConfig pid_config_from_json(const nlohmann::json& j);
L1Config l1_config_from_json(const nlohmann::json& j);

Scenario scenario_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace liempc

#endif  // LIEMPC_CONFIG_IO_HPP_
