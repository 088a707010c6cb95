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

#ifndef MIXFORM_EMIT_HPP
#define MIXFORM_EMIT_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mixform/scenario.hpp"
#include "mixform/sim.hpp"

namespace mixform {

/// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_double(double value);

/**
 * Column names of the trajectory CSV:
 *   t, then per agent i (1-based): q{i}_1, q{i}_2, dq{i}_1, dq{i}_2, x{i}, y{i}, u{i}_1, u{i}_2,
 *   then e_1 .. e_|E|, xi_norm, U.
 */
std::vector<std::string> csv_header(std::size_t n_agents, std::size_t n_edges);

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);

/// Inverse of write_trajectory_csv. Agent and edge counts come from the header; monitors are left empty.
TrajectoryLog read_trajectory_csv(std::istream& in);
TrajectoryLog read_trajectory_csv(const std::filesystem::path& path);

std::string summary_json(const Scenario& scenario, const TrajectoryLog& log, const RunSummary& summary,
                         const VerificationReport& report);

struct RunArtifacts {
    std::filesystem::path trajectory_csv;
    std::filesystem::path summary_json;
    std::vector<std::filesystem::path> plots;
};

/// Writes trajectory.csv, summary.json and, if @p svg, paths/errors/lyapunov/joints SVG plots.
RunArtifacts emit(const Scenario& scenario, const TrajectoryLog& log, const std::filesystem::path& out_dir,
                  bool svg);

} // namespace mixform

#endif // MIXFORM_EMIT_HPP
