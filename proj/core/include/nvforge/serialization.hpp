// Copyright 2026 The nvforge Authors
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

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "nvforge/experiment.hpp"
#include "nvforge/kak.hpp"
#include "nvforge/pulse.hpp"
#include "nvforge/spin_model.hpp"

namespace nvforge {

// Malformed input raises PreconditionError; nlohmann exceptions never escape.

nlohmann::json params_to_json(const FifteenParams& p);
FifteenParams params_from_json(const nlohmann::json& j);

/// 4x4 array of [re, im] pairs.
nlohmann::json matrix_to_json(const Mat4& m);
Mat4 matrix_from_json(const nlohmann::json& j);

/// [{kind, params: {...}}], named gates carry their matrix.
nlohmann::json circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const nlohmann::json& j);

/// Durations are rounded to 0.01 ns.
nlohmann::json schedule_to_json(const PulseSchedule& schedule);
PulseSchedule schedule_from_json(const nlohmann::json& j);
std::string schedule_to_csv(const PulseSchedule& schedule);

nlohmann::json report_to_json(const PopulationReport& report);

/// level,ideal,simulated rows in label order.
std::string bars_csv(const PopulationReport& ideal,
                     const PopulationReport& simulated);

nlohmann::json calibration_to_json(const CalibrationResult& result);
nlohmann::json convention_search_to_json(const std::vector<TableRow>& rows,
                                         const std::vector<ConventionScore>& scores,
                                         double tolerance);

nlohmann::json physical_params_to_json(const PhysicalParams& phys);
PhysicalParams physical_params_from_json(const nlohmann::json& j,
                                         PhysicalParams defaults = {});
nlohmann::json noise_to_json(const NoiseModel& noise);
NoiseModel noise_from_json(const nlohmann::json& j, NoiseModel defaults = {});

BasisConvention basis_from_string(const std::string& text);
std::string to_string(BasisConvention basis);

/// Rounds to 0.01 ns.
double round_duration(double ns);

}  // namespace nvforge
