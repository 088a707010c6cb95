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

#ifndef MIXFORM_CONTROL_HPP
#define MIXFORM_CONTROL_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mixform/dynamics.hpp"
#include "mixform/formation.hpp"
#include "mixform/kinematics.hpp"

namespace mixform {

/// Proportional (formation) and damping gains shared by every agent.
struct Gains {
    double kp = 0.0;
    double kd = 0.0;

    /// Finite and non-negative. Convergence additionally needs kp > 0 and kd > 0.
    void validate() const;

    bool operator==(const Gains&) const = default;
};

enum class Actuation { Full, PassiveActive };

/**
 * @brief Static description of one arm in the network.
 *
 * For passive-active arms the branch of the holonomic curve through the
 * initial configuration is fixed at construction.
 */
struct Agent {
    Actuation mode = Actuation::Full;
    ManipulatorParams params;
    AlphaParams alpha;
    Eigen::Vector2d base = Eigen::Vector2d::Zero();
    std::optional<HolonomicBranch> branch;

    bool passive_active() const { return mode == Actuation::PassiveActive; }
};

/// Validates parameters and, for passive-active arms, the stationary start.
Agent make_agent(Actuation mode, const ManipulatorParams& params, const Eigen::Vector2d& base,
                 const JointState& initial);

/// What agent i is allowed to measure about edge k: b_ik, z_k and e_k.
struct IncidentEdge {
    double sign = 0.0;
    Eigen::Vector2d z = Eigen::Vector2d::Zero();
    double e = 0.0;
};

/// sum_k b_ik * 2 z_k * e_k over the agent's own edges.
Eigen::Vector2d local_gradient(std::span<const IncidentEdge> edges);

/// -kp J^T e_hat - kd qdot.
Eigen::Vector2d control_fa(const Gains& gains, const Eigen::Matrix2d& J,
                           const Eigen::Vector2d& e_hat, const Eigen::Vector2d& qdot);

/// (0, -kp Jb^T e_hat - kd qdot2). The passive joint torque is exactly zero.
Eigen::Vector2d control_pa(const Gains& gains, const Eigen::Vector2d& J_bar,
                           const Eigen::Vector2d& e_hat, double qdot2);

/// Torque of one agent from its own joint state and its incident edges only.
Eigen::Vector2d agent_torque(const Gains& gains, const Agent& agent, const JointState& joint,
                             std::span<const IncidentEdge> edges);

/// Snapshot of the network with all derived task-space quantities.
struct NetworkState {
    std::vector<JointState> joints;
    Eigen::VectorXd x;      // stacked end-effector positions
    EdgeState edges;
    Eigen::VectorXd e_hat;  // stacked dV/dx
};

NetworkState evaluate_network(std::span<const Agent> agents, const FormationSpec& spec,
                              std::span<const JointState> joints);

/// Measurements available to @p agent, in edge declaration order.
std::vector<IncidentEdge> incident_measurements(const FormationSpec& spec, const EdgeState& edges,
                                                std::size_t agent);

std::vector<Eigen::Vector2d> network_torques(const Gains& gains, std::span<const Agent> agents,
                                             const FormationSpec& spec, const NetworkState& state);

/// kp V(e) + 0.5 sum qdot_i^T M_i qdot_i.
double lyapunov(const Gains& gains, std::span<const Agent> agents, const NetworkState& state);

/// Stacked actuated joint rates: both joints of full arms, q2dot of passive-active arms.
Eigen::VectorXd stacked_xi(std::span<const Agent> agents, std::span<const JointState> joints);

/// |J_i^T e_hat_i| for full arms, |J*_i e_hat_i| for passive-active arms.
std::vector<double> stationarity_residuals(std::span<const Agent> agents, const NetworkState& state);

/// |det J| for full arms, |Jb1 Jb2| for passive-active arms.
double singularity_margin(const Agent& agent, const Eigen::Vector2d& q);

} // namespace mixform

#endif // MIXFORM_CONTROL_HPP
