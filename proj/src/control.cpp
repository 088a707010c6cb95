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

#include "mixform/control.hpp"

#include <cmath>
#include <string>

#include "mixform/errors.hpp"

namespace mixform {

void Gains::validate() const {
    if (!std::isfinite(kp) || !std::isfinite(kd) || kp < 0.0 || kd < 0.0) {
        throw ValidationError("gains kp and kd must be finite and non-negative");
    }
}

Agent make_agent(Actuation mode, const ManipulatorParams& params, const Eigen::Vector2d& base,
                 const JointState& initial) {
    if (!base.allFinite()) {
        throw ValidationError("manipulator base must be finite");
    }
    if (!initial.q.allFinite() || !initial.qdot.allFinite()) {
        throw ValidationError("initial joint state must be finite");
    }
    Agent agent;
    agent.mode = mode;
    agent.params = params;
    agent.alpha = alphas(params);
    agent.base = base;
    if (mode == Actuation::PassiveActive) {
        agent.branch = holonomic_branch(agent.alpha, initial);
    }
    return agent;
}

Eigen::Vector2d local_gradient(std::span<const IncidentEdge> edges) {
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (const IncidentEdge& edge : edges) {
        g += edge.sign * (2.0 * edge.z * edge.e);
    }
    return g;
}

Eigen::Vector2d control_fa(const Gains& gains, const Eigen::Matrix2d& J,
                           const Eigen::Vector2d& e_hat, const Eigen::Vector2d& qdot) {
    return -gains.kp * (J.transpose() * e_hat) - gains.kd * qdot;
}

Eigen::Vector2d control_pa(const Gains& gains, const Eigen::Vector2d& J_bar,
                           const Eigen::Vector2d& e_hat, double qdot2) {
    return Eigen::Vector2d{0.0, -gains.kp * J_bar.dot(e_hat) - gains.kd * qdot2};
}

Eigen::Vector2d agent_torque(const Gains& gains, const Agent& agent, const JointState& joint,
                             std::span<const IncidentEdge> edges) {
    const Eigen::Vector2d e_hat = local_gradient(edges);
    if (agent.passive_active()) {
        return control_pa(gains, reduced_jacobian(agent.alpha, agent.params, joint.q), e_hat,
                          joint.qdot(1));
    }
    return control_fa(gains, jacobian(agent.params, joint.q), e_hat, joint.qdot);
}

NetworkState evaluate_network(std::span<const Agent> agents, const FormationSpec& spec,
                              std::span<const JointState> joints) {
    if (agents.size() != spec.n_agents || joints.size() != spec.n_agents) {
        throw ValidationError("network has " + std::to_string(agents.size()) + " agents and " +
                              std::to_string(joints.size()) + " joint states, formation expects " +
                              std::to_string(spec.n_agents));
    }
    NetworkState state;
    state.joints.assign(joints.begin(), joints.end());
    state.x.resize(static_cast<Eigen::Index>(2 * agents.size()));
    for (std::size_t i = 0; i < agents.size(); ++i) {
        state.x.segment<2>(static_cast<Eigen::Index>(2 * i)) =
            fk(agents[i].params, joints[i].q, agents[i].base);
    }
    state.edges = edge_state(spec, state.x);
    state.e_hat = Eigen::VectorXd::Zero(state.x.size());
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const auto measured = incident_measurements(spec, state.edges, i);
        state.e_hat.segment<2>(static_cast<Eigen::Index>(2 * i)) = local_gradient(measured);
    }
    return state;
}

std::vector<IncidentEdge> incident_measurements(const FormationSpec& spec, const EdgeState& edges,
                                                std::size_t agent) {
    std::vector<IncidentEdge> out;
    for (std::size_t k = 0; k < spec.edges.size(); ++k) {
        double sign = 0.0;
        if (spec.edges[k].tail == agent) {
            sign = 1.0;
        } else if (spec.edges[k].head == agent) {
            sign = -1.0;
        } else {
            continue;
        }
        out.push_back({sign, edges.z[k], edges.e(static_cast<Eigen::Index>(k))});
    }
    return out;
}

std::vector<Eigen::Vector2d> network_torques(const Gains& gains, std::span<const Agent> agents,
                                             const FormationSpec& spec, const NetworkState& state) {
    std::vector<Eigen::Vector2d> u;
    u.reserve(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const auto measured = incident_measurements(spec, state.edges, i);
        u.push_back(agent_torque(gains, agents[i], state.joints[i], measured));
    }
    return u;
}

double lyapunov(const Gains& gains, std::span<const Agent> agents, const NetworkState& state) {
    double kinetic = 0.0;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        kinetic += kinetic_energy(agents[i].alpha, state.joints[i]);
    }
    return gains.kp * potential(state.edges.e) + kinetic;
}

Eigen::VectorXd stacked_xi(std::span<const Agent> agents, std::span<const JointState> joints) {
    std::vector<double> xi;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        if (!agents[i].passive_active()) {
            xi.push_back(joints[i].qdot(0));
        }
        xi.push_back(joints[i].qdot(1));
    }
    return Eigen::Map<const Eigen::VectorXd>(xi.data(), static_cast<Eigen::Index>(xi.size()));
}

std::vector<double> stationarity_residuals(std::span<const Agent> agents, const NetworkState& state) {
    std::vector<double> out;
    out.reserve(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const Eigen::Vector2d e_hat = state.e_hat.segment<2>(static_cast<Eigen::Index>(2 * i));
        const Eigen::Vector2d& q = state.joints[i].q;
        if (agents[i].passive_active()) {
            out.push_back((augmented_jacobian(agents[i].alpha, agents[i].params, q) * e_hat).norm());
        } else {
            out.push_back((jacobian(agents[i].params, q).transpose() * e_hat).norm());
        }
    }
    return out;
}

double singularity_margin(const Agent& agent, const Eigen::Vector2d& q) {
    if (agent.passive_active()) {
        const Eigen::Vector2d jb = reduced_jacobian(agent.alpha, agent.params, q);
        return std::abs(jb(0) * jb(1));
    }
    return std::abs(jacobian(agent.params, q).determinant());
}

} // namespace mixform
