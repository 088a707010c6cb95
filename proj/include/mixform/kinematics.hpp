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

#ifndef MIXFORM_KINEMATICS_HPP
#define MIXFORM_KINEMATICS_HPP

#include <vector>

#include <Eigen/Dense>

#include "mixform/dynamics.hpp"

namespace mixform {

/// End-effector position h(q) + base. x = -L1 sin q1 - L2 sin(q1+q2), y = L1 cos q1 + L2 cos(q1+q2).
Eigen::Vector2d fk(const ManipulatorParams& params, const Eigen::Vector2d& q,
                   const Eigen::Vector2d& base);

/// dh/dq. det J = L1 L2 sin q2.
Eigen::Matrix2d jacobian(const ManipulatorParams& params, const Eigen::Vector2d& q);

/**
 * @brief Integral curve of a passive-active arm started at rest.
 *
 * With u1 = 0 and qdot(0) = 0 the generalized momentum of the passive joint
 * stays zero, M11 qdot1 + M12 qdot2 = 0, which integrates to
 *
 *   q1 = -q2/2 - gamma * atan(rho * tan(q2/2)) - gamma * k * pi + eta
 *
 * on the branch q2 in [-pi + 2k pi, pi + 2k pi]. The arctan term is lifted
 * to a continuous function of q2 so the curve can be followed across
 * q2 = pi + 2k pi.
 */
struct HolonomicBranch {
    double gamma = 0.0;
    double rho = 1.0;
    double eta = 0.0;
    JointState q0;

    /// k = floor((q2 + pi) / (2 pi)).
    static long branch_index(double q2);
};

/// Throws AssumptionError if q0.qdot != 0 or |q0.q2| > pi.
HolonomicBranch holonomic_branch(const AlphaParams& alpha, const JointState& q0);

/// atan(rho tan(q2/2)) + k pi, continuous in q2 and exact at odd multiples of pi.
double lifted_arctan(double rho, double q2);

/// q1 on the branch as a function of q2. Returns q0.q1 bit-exactly at q2 = q0.q2.
double f_of_q2(const HolonomicBranch& branch, double q2);

/// Jacobian of the passive-active arm w.r.t. its actuated joint, J (-M12/M11, 1)^T.
Eigen::Vector2d reduced_jacobian(const AlphaParams& alpha, const ManipulatorParams& params,
                                 const Eigen::Vector2d& q);

/// [[Jb1, Jb2], [Jb1, -Jb2]]; invertible iff Jb1 * Jb2 != 0.
Eigen::Matrix2d augmented_jacobian(const AlphaParams& alpha, const ManipulatorParams& params,
                                   const Eigen::Vector2d& q);

/// Jb1 * Jb2 evaluated on the branch at (f(q2), q2).
double singularity_function(const AlphaParams& alpha, const ManipulatorParams& params,
                            const HolonomicBranch& branch, double q2);

struct SingularityScan {
    double grid_step = 1e-3;
    double tolerance = 1e-9;
};

/**
 * @brief Roots of Jb1 * Jb2 along the branch on [lo, hi].
 *
 * Sign-change scan on a uniform grid followed by bisection. Isolated roots
 * closer together than the grid step, or tangential roots, are not found.
 * Returned in increasing order.
 */
std::vector<double> find_singularities(const AlphaParams& alpha, const ManipulatorParams& params,
                                       const HolonomicBranch& branch, double lo, double hi,
                                       const SingularityScan& scan = {});

} // namespace mixform

#endif // MIXFORM_KINEMATICS_HPP
