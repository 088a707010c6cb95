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

#include "mixform/dynamics.hpp"

#include <cmath>
#include <string>

#include "mixform/errors.hpp"

namespace mixform {

namespace {

void require_positive(double value, const char* name) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw ValidationError(std::string("manipulator parameter ") + name +
                              " must be finite and strictly positive, got " +
                              std::to_string(value));
    }
}

} // namespace

void ManipulatorParams::validate() const {
    require_positive(m1, "m1");
    require_positive(m2, "m2");
    require_positive(I1, "I1");
    require_positive(I2, "I2");
    require_positive(L1, "L1");
    require_positive(L2, "L2");
    require_positive(l1, "l1");
    require_positive(l2, "l2");
    if (l1 > L1) {
        throw ValidationError("manipulator parameter l1 must not exceed L1");
    }
    if (l2 > L2) {
        throw ValidationError("manipulator parameter l2 must not exceed L2");
    }
}

void AlphaParams::validate() const {
    if (!(std::isfinite(alpha1) && std::isfinite(alpha2) && std::isfinite(alpha3))) {
        throw ValidationError("alpha parameters must be finite");
    }
    if (alpha1 <= 0.0 || alpha2 <= 0.0 || alpha3 <= 0.0) {
        throw ValidationError("alpha parameters must be strictly positive");
    }
    if (alpha1 * alpha2 <= alpha3 * alpha3) {
        throw ValidationError("alpha1 * alpha2 must exceed alpha3^2 (mass matrix not positive definite)");
    }
}

AlphaParams alphas(const ManipulatorParams& p) {
    p.validate();
    AlphaParams a{
        p.m1 * p.l1 * p.l1 + p.m2 * p.L1 * p.L1 + p.I1,
        p.m2 * p.l2 * p.l2 + p.I2,
        p.m2 * p.L1 * p.l2,
    };
    a.validate();
    return a;
}

Eigen::Matrix2d mass_matrix(const AlphaParams& a, double q2) {
    const double c2 = std::cos(q2);
    const double m12 = a.alpha2 + a.alpha3 * c2;
    Eigen::Matrix2d M;
    M << a.alpha1 + a.alpha2 + 2.0 * a.alpha3 * c2, m12,
         m12, a.alpha2;
    return M;
}

Eigen::Matrix2d mass_matrix_partial(const AlphaParams& a, double q2) {
    const double s2 = std::sin(q2);
    Eigen::Matrix2d dM;
    dM << -2.0 * a.alpha3 * s2, -a.alpha3 * s2,
          -a.alpha3 * s2, 0.0;
    return dM;
}

Eigen::Matrix2d coriolis_matrix(const AlphaParams& a, const JointState& s) {
    const double h = a.alpha3 * std::sin(s.q(1));
    const double dq1 = s.qdot(0);
    const double dq2 = s.qdot(1);
    Eigen::Matrix2d C;
    C << -h * dq2, -h * (dq1 + dq2),
          h * dq1, 0.0;
    return C;
}

Eigen::Vector2d forward_dynamics(const AlphaParams& a, const JointState& s,
                                 const Eigen::Vector2d& u) {
    if (!s.q.allFinite() || !s.qdot.allFinite() || !u.allFinite()) {
        throw NumericInputError("forward_dynamics: non-finite state or torque");
    }
    const Eigen::Matrix2d M = mass_matrix(a, s.q(1));
    const Eigen::Vector2d rhs = u - coriolis_matrix(a, s) * s.qdot;
    const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    return Eigen::Vector2d{
        (M(1, 1) * rhs(0) - M(0, 1) * rhs(1)) / det,
        (M(0, 0) * rhs(1) - M(1, 0) * rhs(0)) / det,
    };
}

double skew_residual(const AlphaParams& a, const JointState& s) {
    const Eigen::Matrix2d Mdot = mass_matrix_partial(a, s.q(1)) * s.qdot(1);
    const Eigen::Matrix2d S = Mdot - 2.0 * coriolis_matrix(a, s);
    return (S + S.transpose()).norm();
}

double kinetic_energy(const AlphaParams& a, const JointState& s) {
    return 0.5 * s.qdot.dot(mass_matrix(a, s.q(1)) * s.qdot);
}

} // namespace mixform
