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

#include "mixform/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mixform/errors.hpp"
#include "mixform/kinematics.hpp"

namespace mixform {

void SimConfig::validate() const {
    if (!std::isfinite(dt) || dt <= 0.0) {
        throw ValidationError("sim.dt must be finite and positive");
    }
    if (!std::isfinite(t_final) || t_final < dt) {
        throw ValidationError("sim.t_final must be finite and at least sim.dt");
    }
    if (log_stride < 1) {
        throw ValidationError("sim.log_stride must be at least 1");
    }
    gains.validate();
}

std::size_t SimConfig::steps() const {
    return static_cast<std::size_t>(std::llround(t_final / dt));
}

namespace {

template <class Error>
[[noreturn]] void rethrow_for_agent(std::size_t i, const Error& err) {
    throw Error("agent " + std::to_string(i + 1) + ": " + err.what());
}

[[noreturn]] void throw_divergence(std::size_t agent, double t) {
    throw DivergenceError(agent, t,
                          "agent " + std::to_string(agent + 1) +
                              " state became non-finite in the step starting at t = " + std::to_string(t));
}

} // namespace

void Scenario::validate() const {
    if (agents.empty()) {
        throw ValidationError("scenario declares no agents");
    }
    if (formation.n_agents != agents.size()) {
        throw ValidationError("formation graph has " + std::to_string(formation.n_agents) +
                              " vertices but the scenario declares " + std::to_string(agents.size()) +
                              " agents");
    }
    formation.validate();
    config.validate();
    for (std::size_t i = 0; i < agents.size(); ++i) {
        try {
            (void)make_agent(agents[i].mode, agents[i].params, agents[i].base, agents[i].initial);
        } catch (const AssumptionError& err) {
            rethrow_for_agent(i, err);
        } catch (const ValidationError& err) {
            rethrow_for_agent(i, err);
        }
    }
}

Network build_network(const Scenario& scenario) {
    scenario.validate();
    Network net;
    net.formation = scenario.formation;
    net.agents.reserve(scenario.agents.size());
    net.joints.reserve(scenario.agents.size());
    for (const AgentSpec& a : scenario.agents) {
        net.agents.push_back(make_agent(a.mode, a.params, a.base, a.initial));
        net.joints.push_back(a.initial);
    }
    return net;
}

JointState rk4_step(const AlphaParams& alpha, const JointState& s, const Eigen::Vector2d& u,
                    double dt) {
    auto accel = [&](const Eigen::Vector2d& q, const Eigen::Vector2d& qdot) {
        return forward_dynamics(alpha, JointState{q, qdot}, u);
    };
    const Eigen::Vector2d k1q = s.qdot;
    const Eigen::Vector2d k1v = accel(s.q, s.qdot);
    const Eigen::Vector2d k2q = s.qdot + 0.5 * dt * k1v;
    const Eigen::Vector2d k2v = accel(s.q + 0.5 * dt * k1q, k2q);
    const Eigen::Vector2d k3q = s.qdot + 0.5 * dt * k2v;
    const Eigen::Vector2d k3v = accel(s.q + 0.5 * dt * k2q, k3q);
    const Eigen::Vector2d k4q = s.qdot + dt * k3v;
    const Eigen::Vector2d k4v = accel(s.q + dt * k3q, k4q);
    JointState next;
    next.q = s.q + (dt / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    next.qdot = s.qdot + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    return next;
}

Network step_with_torques(const Network& network, const std::vector<Eigen::Vector2d>& torques,
                          double dt) {
    Network next = network;
    ++next.step_count;
    next.time = static_cast<double>(next.step_count) * dt;
    for (std::size_t i = 0; i < network.agents.size(); ++i) {
        try {
            next.joints[i] = rk4_step(network.agents[i].alpha, network.joints[i], torques[i], dt);
        } catch (const NumericInputError&) {
            throw_divergence(i, network.time);
        }
        if (!next.joints[i].q.allFinite() || !next.joints[i].qdot.allFinite()) {
            throw_divergence(i, network.time);
        }
    }
    return next;
}

namespace {

// RK4 on the coupled network, feedback evaluated at every stage. @p start_torques are the
// torques of the pre-step state, already computed by the caller.
Network stagewise_step(const Network& network, const Gains& gains, double dt,
                       const std::vector<Eigen::Vector2d>& start_torques) {
    const std::size_t n = network.agents.size();
    using Rates = std::vector<JointState>;  // (qdot, qddot) per agent

    auto rates = [&](const std::vector<JointState>& joints, const std::vector<Eigen::Vector2d>* torques) {
        std::vector<Eigen::Vector2d> computed;
        if (torques == nullptr) {
            const NetworkState state = evaluate_network(network.agents, network.formation, joints);
            computed = network_torques(gains, network.agents, network.formation, state);
            torques = &computed;
        }
        Rates out(n);
        for (std::size_t i = 0; i < n; ++i) {
            try {
                out[i].q = joints[i].qdot;
                out[i].qdot = forward_dynamics(network.agents[i].alpha, joints[i], (*torques)[i]);
            } catch (const NumericInputError&) {
                throw_divergence(i, network.time);
            }
        }
        return out;
    };
    auto shifted = [&](const Rates& k, double h) {
        std::vector<JointState> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i].q = network.joints[i].q + h * k[i].q;
            out[i].qdot = network.joints[i].qdot + h * k[i].qdot;
        }
        return out;
    };

    const Rates k1 = rates(network.joints, &start_torques);
    const Rates k2 = rates(shifted(k1, 0.5 * dt), nullptr);
    const Rates k3 = rates(shifted(k2, 0.5 * dt), nullptr);
    const Rates k4 = rates(shifted(k3, dt), nullptr);

    Network next = network;
    ++next.step_count;
    next.time = static_cast<double>(next.step_count) * dt;
    for (std::size_t i = 0; i < n; ++i) {
        JointState& j = next.joints[i];
        j.q += (dt / 6.0) * (k1[i].q + 2.0 * k2[i].q + 2.0 * k3[i].q + k4[i].q);
        j.qdot += (dt / 6.0) * (k1[i].qdot + 2.0 * k2[i].qdot + 2.0 * k3[i].qdot + k4[i].qdot);
        if (!j.q.allFinite() || !j.qdot.allFinite()) {
            throw_divergence(i, network.time);
        }
    }
    return next;
}

Network advance(const Network& network, const SimConfig& config,
                const std::vector<Eigen::Vector2d>& start_torques) {
    if (config.hold == ControlHold::Step) {
        return step_with_torques(network, start_torques, config.dt);
    }
    return stagewise_step(network, config.gains, config.dt, start_torques);
}

} // namespace

Network step(const Network& network, const SimConfig& config) {
    const NetworkState state = evaluate_network(network.agents, network.formation, network.joints);
    return advance(network, config, network_torques(config.gains, network.agents, network.formation, state));
}

void annotate_monitors(LogSample& sample, const std::vector<Agent>& agents, const MonitorFlags& flags) {
    sample.margin.clear();
    sample.holonomy_drift.clear();
    sample.momentum_residual.clear();
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const Agent& agent = agents[i];
        const JointState& joint = sample.joints[i];
        if (flags.singularity) {
            sample.margin.push_back(singularity_margin(agent, joint.q));
        }
        if (flags.holonomy) {
            double drift = 0.0;
            double momentum = 0.0;
            if (agent.passive_active()) {
                drift = std::abs(joint.q(0) - f_of_q2(*agent.branch, joint.q(1)));
                const Eigen::Matrix2d M = mass_matrix(agent.alpha, joint.q(1));
                momentum = std::abs(M(0, 0) * joint.qdot(0) + M(0, 1) * joint.qdot(1));
            }
            sample.holonomy_drift.push_back(drift);
            sample.momentum_residual.push_back(momentum);
        }
    }
}

void recompute_monitors(TrajectoryLog& log, const std::vector<Agent>& agents) {
    if (agents.size() != log.n_agents) {
        throw ValidationError("log has " + std::to_string(log.n_agents) + " agents, scenario has " +
                              std::to_string(agents.size()));
    }
    log.modes.clear();
    for (const Agent& a : agents) {
        log.modes.push_back(a.mode);
    }
    for (LogSample& sample : log.samples) {
        annotate_monitors(sample, agents);
    }
}

TrajectoryLog run(const Scenario& scenario) {
    Network net = build_network(scenario);
    const SimConfig& config = scenario.config;
    const std::size_t n_steps = config.steps();

    TrajectoryLog log;
    log.n_agents = net.agents.size();
    log.n_edges = net.formation.edges.size();
    for (const Agent& a : net.agents) {
        log.modes.push_back(a.mode);
    }
    log.samples.reserve(n_steps / config.log_stride + 2);

    for (std::size_t k = 0;; ++k) {
        const NetworkState state = evaluate_network(net.agents, net.formation, net.joints);
        std::vector<Eigen::Vector2d> torques = network_torques(config.gains, net.agents, net.formation, state);

        if (k % config.log_stride == 0 || k == n_steps) {
            LogSample sample;
            sample.t = static_cast<double>(k) * config.dt;
            sample.joints = state.joints;
            sample.x.reserve(net.agents.size());
            for (std::size_t i = 0; i < net.agents.size(); ++i) {
                sample.x.push_back(state.x.segment<2>(static_cast<Eigen::Index>(2 * i)));
            }
            sample.u = torques;
            sample.e = state.edges.e;
            sample.xi_norm = stacked_xi(net.agents, state.joints).norm();
            sample.lyapunov = lyapunov(config.gains, net.agents, state);
            annotate_monitors(sample, net.agents, config.monitors);
            log.samples.push_back(std::move(sample));
        }
        if (k == n_steps) {
            break;
        }
        net = advance(net, config, torques);
    }
    return log;
}

bool VerificationReport::passed() const {
    bool any = false;
    for (const MonitorVerdict& m : monitors) {
        if (m.evaluated) {
            any = true;
            if (!m.passed) {
                return false;
            }
        }
    }
    return any;
}

const MonitorVerdict* VerificationReport::find(const std::string& name) const {
    for (const MonitorVerdict& m : monitors) {
        if (m.name == name) {
            return &m;
        }
    }
    return nullptr;
}

namespace {

// Largest per-agent value of a monitor series over the log, with the first sample exceeding tol.
MonitorVerdict max_series(const TrajectoryLog& log, const std::string& name, double tol,
                          std::vector<double> LogSample::*series) {
    MonitorVerdict v{name, false, true, 0.0, tol, std::nullopt};
    for (std::size_t n = 0; n < log.samples.size(); ++n) {
        const auto& values = log.samples[n].*series;
        if (values.empty()) {
            continue;
        }
        v.evaluated = true;
        for (double value : values) {
            v.worst = std::max(v.worst, value);
            if (!(value <= tol) && !v.first_failure) {
                v.first_failure = n;
            }
        }
    }
    v.passed = v.evaluated && !v.first_failure;
    return v;
}

} // namespace

VerificationReport verify_run(const TrajectoryLog& log, const VerifyTolerances& tol) {
    VerificationReport report;
    const auto& s = log.samples;

    MonitorVerdict lyap{"lyapunov_monotonicity", !s.empty(), true, 0.0, tol.lyapunov_slack, std::nullopt};
    for (std::size_t n = 0; n + 1 < s.size(); ++n) {
        const double slack = tol.lyapunov_slack * (1.0 + s[n].lyapunov);
        const double increase = s[n + 1].lyapunov - s[n].lyapunov;
        lyap.worst = std::max(lyap.worst, increase / (1.0 + s[n].lyapunov));
        if (!(increase <= slack) && !lyap.first_failure) {
            lyap.first_failure = n + 1;
        }
    }
    for (const LogSample& sample : s) {
        if (!std::isfinite(sample.lyapunov) && !lyap.first_failure) {
            lyap.first_failure = static_cast<std::size_t>(&sample - s.data());
        }
    }
    lyap.passed = lyap.evaluated && !lyap.first_failure;
    report.monitors.push_back(lyap);

    report.monitors.push_back(
        max_series(log, "momentum_residual", tol.momentum_residual, &LogSample::momentum_residual));
    report.monitors.push_back(
        max_series(log, "holonomy_drift", tol.holonomy_drift, &LogSample::holonomy_drift));

    MonitorVerdict margin{"singularity_margin", false, true,
                          std::numeric_limits<double>::infinity(), tol.singularity_margin, std::nullopt};
    for (std::size_t n = 0; n < s.size(); ++n) {
        for (double m : s[n].margin) {
            margin.evaluated = true;
            margin.worst = std::min(margin.worst, m);
            if (!(m >= tol.singularity_margin) && !margin.first_failure) {
                margin.first_failure = n;
            }
        }
    }
    margin.passed = margin.evaluated && !margin.first_failure;
    report.monitors.push_back(margin);

    MonitorVerdict xi{"terminal_xi", !s.empty(), false, 0.0, tol.terminal_xi, std::nullopt};
    MonitorVerdict err{"terminal_edge_error", !s.empty(), false, 0.0, tol.terminal_edge_error, std::nullopt};
    if (!s.empty()) {
        xi.worst = s.back().xi_norm;
        xi.passed = xi.worst <= tol.terminal_xi;
        err.worst = s.back().e.size() > 0 ? s.back().e.cwiseAbs().maxCoeff() : 0.0;
        err.passed = err.worst <= tol.terminal_edge_error;
        if (!xi.passed) {
            xi.first_failure = s.size() - 1;
        }
        if (!err.passed) {
            err.first_failure = s.size() - 1;
        }
    }
    report.monitors.push_back(xi);
    report.monitors.push_back(err);
    return report;
}

RunSummary summarize(const TrajectoryLog& log, const VerifyTolerances& tol) {
    RunSummary out;
    if (log.samples.empty()) {
        return out;
    }
    const LogSample& last = log.samples.back();
    out.t_final = last.t;
    out.final_e = last.e;
    for (const JointState& j : last.joints) {
        out.final_q.push_back(j.q);
    }
    out.final_xi_norm = last.xi_norm;
    out.final_lyapunov = last.lyapunov;

    const std::size_t n = log.n_agents;
    out.min_margin.assign(n, std::numeric_limits<double>::infinity());
    out.max_drift.assign(n, 0.0);
    out.max_momentum.assign(n, 0.0);
    for (std::size_t k = 0; k < log.samples.size(); ++k) {
        const LogSample& sample = log.samples[k];
        for (std::size_t i = 0; i < sample.margin.size(); ++i) {
            out.min_margin[i] = std::min(out.min_margin[i], sample.margin[i]);
        }
        for (std::size_t i = 0; i < sample.holonomy_drift.size(); ++i) {
            out.max_drift[i] = std::max(out.max_drift[i], sample.holonomy_drift[i]);
            out.max_momentum[i] = std::max(out.max_momentum[i], sample.momentum_residual[i]);
        }
        if (k + 1 < log.samples.size()) {
            const double increase = log.samples[k + 1].lyapunov - sample.lyapunov;
            if (!(increase <= tol.lyapunov_slack * (1.0 + sample.lyapunov))) {
                ++out.lyapunov_violations;
            }
        }
    }
    for (double m : out.min_margin) {
        if (m < tol.singularity_margin) {
            out.singularity_flagged = true;
        }
    }
    return out;
}

} // namespace mixform
