/*
 Copyright 2026 The mixform Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef MIXFORM_SCENARIO_HPP
#define MIXFORM_SCENARIO_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mixform/errors.hpp"
#include "mixform/sim.hpp"

namespace mixform {

inline constexpr int kScenarioSchemaVersion = 1;

/// Malformed scenario document (syntax, missing field, wrong type).
class ScenarioParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Names accepted by builtin_case().
std::vector<std::string> builtin_case_names();

/**
 * Four identical arms at the corners of a 5 x 3 m rectangle driven to a
 * 0.4 m square (four sides plus the 1-3 diagonal).
 *   case1: agent 4 passive-active
 *   case2: agents 3, 4 passive-active
 *   case3: agents 2, 3, 4 passive-active
 */
Scenario builtin_case(std::string_view name);

/// Parses and validates a JSON scenario. Edge endpoints are 1-based in the document.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario(const std::filesystem::path& path);

/// Pretty-printed JSON; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

} // namespace mixform

#endif // MIXFORM_SCENARIO_HPP
