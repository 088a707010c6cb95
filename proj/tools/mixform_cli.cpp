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

// mixform command-line front end.
//
//   mixform run --case case1 --out out/case1 [--svg]
//   mixform verify --log out/case1/trajectory.csv [--case case1]
//   mixform singularities --case case1 --agent 4
//   mixform export --case case2 --out case2.json

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mixform/emit.hpp"
#include "mixform/errors.hpp"
#include "mixform/kinematics.hpp"
#include "mixform/scenario.hpp"
#include "mixform/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitVerification = 4;

struct ScenarioSource {
    std::string case_name;
    std::string config_path;

    void attach(CLI::App* cmd, bool required) {
        auto* c = cmd->add_option("--case", case_name, "Built-in scenario: case1, case2 or case3");
        auto* f = cmd->add_option("--config", config_path, "Scenario JSON file");
        c->excludes(f);
        if (required) {
            cmd->require_option(1, 0);
        }
    }

    bool given() const { return !case_name.empty() || !config_path.empty(); }

    mixform::Scenario load() const {
        if (!case_name.empty()) {
            return mixform::builtin_case(case_name);
        }
        return mixform::load_scenario(config_path);
    }
};

void print_report(const mixform::VerificationReport& report) {
    for (const auto& m : report.monitors) {
        const char* verdict = !m.evaluated ? "SKIP" : (m.passed ? "PASS" : "FAIL");
        std::printf("%-4s %-22s worst=%-24s tol=%s", verdict, m.name.c_str(),
                    mixform::format_double(m.worst).c_str(), mixform::format_double(m.tolerance).c_str());
        if (m.first_failure) {
            std::printf("  first failure at sample %zu", *m.first_failure);
        }
        std::printf("\n");
    }
}

int cmd_run(const ScenarioSource& source, const std::string& out_dir, std::optional<double> dt,
            std::optional<double> t_final, std::optional<double> kp, std::optional<double> kd,
            std::optional<std::size_t> log_stride, const std::optional<std::string>& hold, bool svg) {
    mixform::Scenario scenario = source.load();
    if (dt) scenario.config.dt = *dt;
    if (t_final) scenario.config.t_final = *t_final;
    if (kp) scenario.config.gains.kp = *kp;
    if (kd) scenario.config.gains.kd = *kd;
    if (log_stride) scenario.config.log_stride = *log_stride;
    if (hold) scenario.config.hold = *hold == "stage" ? mixform::ControlHold::Stage : mixform::ControlHold::Step;
    scenario.validate();

    const auto start = std::chrono::steady_clock::now();
    const mixform::TrajectoryLog log = mixform::run(scenario);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto artifacts = mixform::emit(scenario, log, out_dir, svg);
    const auto summary = mixform::summarize(log);
    std::printf("scenario %s: %zu samples, t = %s s, simulated in %.3f s\n",
                scenario.name.empty() ? "(unnamed)" : scenario.name.c_str(), log.samples.size(),
                mixform::format_double(summary.t_final).c_str(), elapsed);
    std::printf("final max |e_k| = %s m^2, |xi| = %s rad/s, U = %s\n",
                mixform::format_double(summary.final_e.size() ? summary.final_e.cwiseAbs().maxCoeff() : 0.0).c_str(),
                mixform::format_double(summary.final_xi_norm).c_str(),
                mixform::format_double(summary.final_lyapunov).c_str());
    print_report(mixform::verify_run(log));
    std::printf("wrote %s and %s", artifacts.trajectory_csv.string().c_str(),
                artifacts.summary_json.string().c_str());
    for (const auto& p : artifacts.plots) {
        std::printf(", %s", p.filename().string().c_str());
    }
    std::printf("\n");
    return kExitOk;
}

int cmd_verify(const std::string& log_path, const ScenarioSource& source) {
    mixform::TrajectoryLog log = mixform::read_trajectory_csv(log_path);
    if (source.given()) {
        const mixform::Network net = mixform::build_network(source.load());
        mixform::recompute_monitors(log, net.agents);
    }
    const auto report = mixform::verify_run(log);
    print_report(report);
    std::printf("%s\n", report.passed() ? "verified" : "verification FAILED");
    return report.passed() ? kExitOk : kExitVerification;
}

int cmd_singularities(const ScenarioSource& source, std::size_t agent_index, double lo, double hi,
                      double step) {
    const mixform::Scenario scenario = source.load();
    if (agent_index < 1 || agent_index > scenario.agents.size()) {
        throw mixform::ValidationError("--agent must be between 1 and " +
                                       std::to_string(scenario.agents.size()));
    }
    const mixform::AgentSpec& spec = scenario.agents[agent_index - 1];
    if (spec.mode == mixform::Actuation::Full) {
        // det J = L1 L2 sin q2.
        std::fprintf(stderr, "agent %zu is fully actuated; listing q2 = k*pi in the interval\n", agent_index);
        for (long k = static_cast<long>(std::ceil(lo / std::numbers::pi));
             static_cast<double>(k) * std::numbers::pi <= hi; ++k) {
            const double root = static_cast<double>(k) * std::numbers::pi;
            if (root > lo && root < hi) {
                std::printf("%s\n", mixform::format_double(root).c_str());
            }
        }
        return kExitOk;
    }
    const mixform::AlphaParams alpha = mixform::alphas(spec.params);
    const mixform::HolonomicBranch branch = mixform::holonomic_branch(alpha, spec.initial);
    mixform::SingularityScan scan;
    scan.grid_step = step;
    for (double root : mixform::find_singularities(alpha, spec.params, branch, lo, hi, scan)) {
        std::printf("%s\n", mixform::format_double(root).c_str());
    }
    return kExitOk;
}

int cmd_export(const ScenarioSource& source, const std::string& out) {
    const std::string text = mixform::serialize_scenario(source.load());
    if (out.empty() || out == "-") {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream file(out);
    if (!(file << text)) {
        throw std::runtime_error("cannot write " + out);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed end-effector formation control of mixed two-link arms"};
    app.require_subcommand(1);

    ScenarioSource run_source;
    std::string run_out;
    std::optional<double> dt, t_final, kp, kd;
    std::optional<std::size_t> log_stride;
    bool svg = false;
    std::optional<std::string> hold;
    auto* run = app.add_subcommand("run", "Simulate a scenario and write trajectory.csv / summary.json");
    run_source.attach(run, true);
    run->add_option("--out", run_out, "Output directory")->required();
    run->add_option("--dt", dt, "Integrator step [s]");
    run->add_option("--t-final", t_final, "Horizon [s]");
    run->add_option("--kp", kp, "Formation gain");
    run->add_option("--kd", kd, "Damping gain");
    run->add_option("--log-stride", log_stride, "Steps per logged sample");
    run->add_option("--hold", hold, "Control evaluation: step (zero-order hold) or stage (every RK4 stage)")
        ->check(CLI::IsMember({"step", "stage"}));
    run->add_flag("--svg", svg, "Also write SVG plots");

    std::string log_path;
    ScenarioSource verify_source;
    auto* verify = app.add_subcommand("verify", "Check a trajectory CSV against the run monitors");
    verify->add_option("--log", log_path, "Trajectory CSV")->required();
    verify_source.attach(verify, false);

    ScenarioSource sing_source;
    std::size_t agent = 0;
    double lo = -std::numbers::pi, hi = std::numbers::pi, step = 1e-3;
    auto* sing = app.add_subcommand("singularities", "Roots of Jbar1*Jbar2 along a passive-active arm's curve");
    sing_source.attach(sing, true);
    sing->add_option("--agent", agent, "1-based agent index")->required();
    sing->add_option("--lo", lo, "Lower end of the q2 interval (default -pi)");
    sing->add_option("--hi", hi, "Upper end of the q2 interval (default pi)");
    sing->add_option("--step", step, "Scan grid step");

    ScenarioSource export_source;
    std::string export_out;
    auto* exp = app.add_subcommand("export", "Write a scenario as JSON");
    export_source.attach(exp, true);
    exp->add_option("--out", export_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*run) {
            return cmd_run(run_source, run_out, dt, t_final, kp, kd, log_stride, hold, svg);
        }
        if (*verify) {
            return cmd_verify(log_path, verify_source);
        }
        if (*sing) {
            return cmd_singularities(sing_source, agent, lo, hi, step);
        }
        if (*exp) {
            return cmd_export(export_source, export_out);
        }
    } catch (const mixform::DivergenceError& e) {
        std::fprintf(stderr, "divergence: %s\n", e.what());
        return kExitDivergence;
    } catch (const mixform::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
