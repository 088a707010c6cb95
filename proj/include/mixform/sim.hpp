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

#ifndef MIXFORM_SIM_HPP
#define MIXFORM_SIM_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixform/control.hpp"
#include "mixform/dynamics.hpp"
#include "mixform/formation.hpp"

namespace mixform {

/// Per-step monitor series to record. U is always logged.
struct MonitorFlags {
    bool holonomy = true;
    bool singularity = true;

    bool operator==(const MonitorFlags&) const = default;
};

/// When the feedback law is evaluated inside an RK4 step.
enum class ControlHold {
    Step,   // once at the step start, held constant over the step (sampled controller)
    Stage,  // at every RK4 stage, i.e. continuous-time feedback
};

struct SimConfig {
    double dt = 1e-3;
    double t_final = 30.0;
    Gains gains;
    MonitorFlags monitors;
    std::size_t log_stride = 1;
    ControlHold hold = ControlHold::Step;

    void validate() const;
    std::size_t steps() const;

    bool operator==(const SimConfig&) const = default;
};

struct AgentSpec {
    Actuation mode = Actuation::Full;
    ManipulatorParams params;
    Eigen::Vector2d base = Eigen::Vector2d::Zero();
    JointState initial;

    bool operator==(const AgentSpec&) const = default;
};

struct Scenario {
    std::string name;
    std::vector<AgentSpec> agents;
    FormationSpec formation;
    SimConfig config;

    /// Throws ValidationError / AssumptionError naming the violated constraint.
    void validate() const;

    bool operator==(const Scenario&) const = default;
};

/// Static agents plus the evolving joint state.
struct Network {
    std::vector<Agent> agents;
    FormationSpec formation;
    std::vector<JointState> joints;
    std::size_t step_count = 0;
    double time = 0.0;
};

Network build_network(const Scenario& scenario);

/// One classical RK4 step of a single arm with the torque held over the step.
JointState rk4_step(const AlphaParams& alpha, const JointState& state, const Eigen::Vector2d& u,
                    double dt);

/**
 * @brief Advances the whole network by one RK4 step of config.dt.
 *
 * With ControlHold::Stage the feedback is re-evaluated from the network
 * state at each of the four stages. With ControlHold::Step torques are
 * computed once from the pre-step state and every arm is integrated
 * independently. Throws DivergenceError on the first agent whose state
 * becomes non-finite.
 */
Network step(const Network& network, const SimConfig& config);

/// Zero-order-hold step with precomputed torques.
Network step_with_torques(const Network& network, const std::vector<Eigen::Vector2d>& torques,
                          double dt);

struct LogSample {
    double t = 0.0;
    std::vector<JointState> joints;
    std::vector<Eigen::Vector2d> x;
    std::vector<Eigen::Vector2d> u;
    Eigen::VectorXd e;
    double xi_norm = 0.0;
    double lyapunov = 0.0;
    // Per-agent monitors; empty when not computed.
    std::vector<double> margin;             // |det J| or |Jb1 Jb2|
    std::vector<double> holonomy_drift;     // |q1 - f(q2)|, 0 for full arms
    std::vector<double> momentum_residual;  // |M11 qdot1 + M12 qdot2|, 0 for full arms
};

struct TrajectoryLog {
    std::size_t n_agents = 0;
    std::size_t n_edges = 0;
    std::vector<Actuation> modes;  // may be empty when reconstructed from CSV without a scenario
    std::vector<LogSample> samples;
};

/// Fills the per-agent monitor series of @p sample from its joint state.
void annotate_monitors(LogSample& sample, const std::vector<Agent>& agents,
                       const MonitorFlags& flags = {});

/// Recomputes monitors for every sample, e.g. after reading a CSV back.
void recompute_monitors(TrajectoryLog& log, const std::vector<Agent>& agents);

/// Integrates the scenario to config.t_final and logs every log_stride-th step and the last one.
TrajectoryLog run(const Scenario& scenario);

struct VerifyTolerances {
    double lyapunov_slack = 1e-6;
    double momentum_residual = 1e-4;
    double holonomy_drift = 1e-4;
    double singularity_margin = 1e-6;
    double terminal_xi = 1e-3;
    double terminal_edge_error = 1e-3;
};

struct MonitorVerdict {
    std::string name;
    bool evaluated = false;
    bool passed = false;
    double worst = 0.0;  // observed extreme of the monitored quantity
    double tolerance = 0.0;
    std::optional<std::size_t> first_failure;  // sample index
};

struct VerificationReport {
    std::vector<MonitorVerdict> monitors;

    /// All evaluated monitors passed.
    bool passed() const;
    const MonitorVerdict* find(const std::string& name) const;
};

VerificationReport verify_run(const TrajectoryLog& log, const VerifyTolerances& tol = {});

struct RunSummary {
    double t_final = 0.0;
    Eigen::VectorXd final_e;
    std::vector<Eigen::Vector2d> final_q;
    double final_xi_norm = 0.0;
    double final_lyapunov = 0.0;
    std::vector<double> min_margin;    // per agent
    std::vector<double> max_drift;     // per agent
    std::vector<double> max_momentum;  // per agent
    std::size_t lyapunov_violations = 0;
    bool singularity_flagged = false;
};

RunSummary summarize(const TrajectoryLog& log, const VerifyTolerances& tol = {});

} // namespace mixform

#endif // MIXFORM_SIM_HPP
