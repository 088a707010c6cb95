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

#ifndef MIXFORM_DYNAMICS_HPP
#define MIXFORM_DYNAMICS_HPP

#include <Eigen/Dense>

namespace mixform {

/**
 * @brief Physical constants of one planar two-link arm.
 *
 * Masses in kg, inertias about each link's COM in kg m^2, lengths in m.
 * l1/l2 are the joint-to-COM distances of link 1/2.
 */
struct ManipulatorParams {
    double m1 = 0.0;
    double m2 = 0.0;
    double I1 = 0.0;
    double I2 = 0.0;
    double L1 = 0.0;
    double L2 = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;

    /// Throws ValidationError naming the first violated constraint.
    void validate() const;

    bool operator==(const ManipulatorParams&) const = default;
};

/// Lumped inertial parameters of the reduced two-link model.
struct AlphaParams {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 0.0;

    void validate() const;

    bool operator==(const AlphaParams&) const = default;
};

struct JointState {
    Eigen::Vector2d q = Eigen::Vector2d::Zero();
    Eigen::Vector2d qdot = Eigen::Vector2d::Zero();

    bool operator==(const JointState&) const = default;
};

/// Validates @p params and maps them to (alpha1, alpha2, alpha3).
AlphaParams alphas(const ManipulatorParams& params);

/// Configuration-dependent mass matrix; depends on q2 only.
Eigen::Matrix2d mass_matrix(const AlphaParams& alpha, double q2);

/// dM/dq2. Multiply by q2dot to get the time derivative of M.
Eigen::Matrix2d mass_matrix_partial(const AlphaParams& alpha, double q2);

Eigen::Matrix2d coriolis_matrix(const AlphaParams& alpha, const JointState& state);

/**
 * @brief Joint accelerations solving M(q) qddot = u - C(q, qdot) qdot.
 *
 * Uses the closed-form inverse of the 2x2 mass matrix, whose determinant
 * alpha1 alpha2 - alpha3^2 cos^2 q2 is bounded away from zero for
 * validated parameters. Throws NumericInputError on non-finite input.
 */
Eigen::Vector2d forward_dynamics(const AlphaParams& alpha, const JointState& state,
                                 const Eigen::Vector2d& u);

/// Frobenius norm of S + S^T with S = Mdot - 2C. Zero up to roundoff.
double skew_residual(const AlphaParams& alpha, const JointState& state);

double kinetic_energy(const AlphaParams& alpha, const JointState& state);

} // namespace mixform

#endif // MIXFORM_DYNAMICS_HPP
