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

#include "mixform/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mixform/errors.hpp"

namespace mixform {

using std::numbers::pi;

Eigen::Vector2d fk(const ManipulatorParams& p, const Eigen::Vector2d& q,
                   const Eigen::Vector2d& base) {
    const double q12 = q(0) + q(1);
    return base + Eigen::Vector2d{
        -p.L1 * std::sin(q(0)) - p.L2 * std::sin(q12),
         p.L1 * std::cos(q(0)) + p.L2 * std::cos(q12),
    };
}

Eigen::Matrix2d jacobian(const ManipulatorParams& p, const Eigen::Vector2d& q) {
    const double q12 = q(0) + q(1);
    const double c1 = std::cos(q(0));
    const double s1 = std::sin(q(0));
    const double c12 = std::cos(q12);
    const double s12 = std::sin(q12);
    Eigen::Matrix2d J;
    J << -p.L1 * c1 - p.L2 * c12, -p.L2 * c12,
         -p.L1 * s1 - p.L2 * s12, -p.L2 * s12;
    return J;
}

long HolonomicBranch::branch_index(double q2) {
    return static_cast<long>(std::floor((q2 + pi) / (2.0 * pi)));
}

double lifted_arctan(double rho, double q2) {
    const long k = HolonomicBranch::branch_index(q2);
    // Half-angle reduced to [-pi/2, pi/2), where cos >= 0 and atan2 agrees with atan(rho tan).
    const double half = 0.5 * q2 - static_cast<double>(k) * pi;
    return std::atan2(rho * std::sin(half), std::cos(half)) + static_cast<double>(k) * pi;
}

HolonomicBranch holonomic_branch(const AlphaParams& a, const JointState& q0) {
    if (q0.qdot(0) != 0.0 || q0.qdot(1) != 0.0) {
        throw AssumptionError(
            "passive-active arm violates the stationary-start requirement: qdot(0) must be "
            "(0, 0), otherwise the passive joint is not holonomically constrained");
    }
    if (!q0.q.allFinite()) {
        throw AssumptionError("passive-active arm initial joint position must be finite");
    }
    if (std::abs(q0.q(1)) > pi) {
        throw AssumptionError("passive-active arm initial q2 must lie in [-pi, pi], got " +
                              std::to_string(q0.q(1)));
    }
    a.validate();
    const double sum = a.alpha1 + a.alpha2;
    HolonomicBranch b;
    b.gamma = (a.alpha2 - a.alpha1) / std::sqrt(sum * sum - 4.0 * a.alpha3 * a.alpha3);
    b.rho = std::sqrt((sum - 2.0 * a.alpha3) / (sum + 2.0 * a.alpha3));
    b.eta = 0.5 * q0.q(1) + q0.q(0) + b.gamma * lifted_arctan(b.rho, q0.q(1));
    b.q0 = q0;
    return b;
}

double f_of_q2(const HolonomicBranch& b, double q2) {
    // Same curve as -q2/2 - gamma*lift(q2) + eta, anchored at q0 so the start is reproduced exactly.
    const double q20 = b.q0.q(1);
    const double shape = -0.5 * q2 - b.gamma * lifted_arctan(b.rho, q2);
    const double shape0 = -0.5 * q20 - b.gamma * lifted_arctan(b.rho, q20);
    return b.q0.q(0) + (shape - shape0);
}

Eigen::Vector2d reduced_jacobian(const AlphaParams& a, const ManipulatorParams& p,
                                 const Eigen::Vector2d& q) {
    const Eigen::Matrix2d M = mass_matrix(a, q(1));
    const Eigen::Matrix2d J = jacobian(p, q);
    const double ratio = M(0, 1) / M(0, 0);
    return Eigen::Vector2d{
        -J(0, 0) * ratio + J(0, 1),
        -J(1, 0) * ratio + J(1, 1),
    };
}

Eigen::Matrix2d augmented_jacobian(const AlphaParams& a, const ManipulatorParams& p,
                                   const Eigen::Vector2d& q) {
    const Eigen::Vector2d jb = reduced_jacobian(a, p, q);
    Eigen::Matrix2d Js;
    Js << jb(0),  jb(1),
          jb(0), -jb(1);
    return Js;
}

double singularity_function(const AlphaParams& a, const ManipulatorParams& p,
                            const HolonomicBranch& b, double q2) {
    const Eigen::Vector2d jb = reduced_jacobian(a, p, Eigen::Vector2d{f_of_q2(b, q2), q2});
    return jb(0) * jb(1);
}

std::vector<double> find_singularities(const AlphaParams& a, const ManipulatorParams& p,
                                       const HolonomicBranch& b, double lo, double hi,
                                       const SingularityScan& scan) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || hi <= lo) {
        throw ValidationError("find_singularities: need a finite interval with lo < hi");
    }
    if (!(scan.grid_step > 0.0) || !(scan.tolerance > 0.0)) {
        throw ValidationError("find_singularities: grid step and tolerance must be positive");
    }
    auto g = [&](double q2) { return singularity_function(a, p, b, q2); };

    std::vector<double> roots;
    const auto n = static_cast<long>(std::ceil((hi - lo) / scan.grid_step));
    double x_prev = lo;
    double g_prev = g(lo);
    if (g_prev == 0.0) {
        roots.push_back(lo);
    }
    for (long i = 1; i <= n; ++i) {
        const double x = (i == n) ? hi : lo + static_cast<double>(i) * scan.grid_step;
        const double gx = g(x);
        if (gx == 0.0) {
            roots.push_back(x);
        } else if (g_prev != 0.0 && std::signbit(gx) != std::signbit(g_prev)) {
            double left = x_prev;
            double right = x;
            double g_left = g_prev;
            while (right - left > scan.tolerance) {
                const double mid = 0.5 * (left + right);
                const double gm = g(mid);
                if (gm == 0.0) {
                    left = right = mid;
                    break;
                }
                if (std::signbit(gm) == std::signbit(g_left)) {
                    left = mid;
                    g_left = gm;
                } else {
                    right = mid;
                }
            }
            roots.push_back(0.5 * (left + right));
        }
        x_prev = x;
        g_prev = gx;
    }
    return roots;
}

} // namespace mixform
