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

// Test-only reference computations. Nothing here calls into the code path it checks.

#ifndef MIXFORM_TESTS_ORACLES_HPP
#define MIXFORM_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "mixform/dynamics.hpp"

namespace mixform::testing {

inline ManipulatorParams reference_arm() {
    ManipulatorParams p;
    p.m1 = 1.2;
    p.m2 = 1.0;
    p.I1 = 0.2250;
    p.I2 = 0.1875;
    p.L1 = 1.5;
    p.L2 = 1.5;
    p.l1 = 0.75;
    p.l2 = 0.75;
    return p;
}

inline AlphaParams reference_alpha() {
    return {3.15, 0.75, 1.125};
}

/// Central difference of a vector-valued function of one scalar.
template <class F>
auto central_difference(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Central-difference Jacobian of a vector function R^n -> R^m.
inline Eigen::MatrixXd numeric_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& x, double h) {
    const Eigen::VectorXd f0 = f(x);
    Eigen::MatrixXd J(f0.size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        Eigen::VectorXd xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return J;
}

/// Random but physically valid arm parameters.
inline ManipulatorParams random_arm(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mass(0.2, 5.0), length(0.3, 2.0), frac(0.1, 1.0), inertia(0.01, 1.0);
    ManipulatorParams p;
    p.m1 = mass(rng);
    p.m2 = mass(rng);
    p.L1 = length(rng);
    p.L2 = length(rng);
    p.l1 = frac(rng) * p.L1;
    p.l2 = frac(rng) * p.L2;
    p.I1 = inertia(rng);
    p.I2 = inertia(rng);
    return p;
}

/// Mass matrix written out from the Lagrangian of two rigid links, independent of the alpha lumping.
inline Eigen::Matrix2d lagrangian_mass_matrix(const ManipulatorParams& p, double q2) {
    const double c2 = std::cos(q2);
    Eigen::Matrix2d M;
    M(0, 0) = p.m1 * p.l1 * p.l1 + p.I1 + p.m2 * (p.L1 * p.L1 + p.l2 * p.l2 + 2.0 * p.L1 * p.l2 * c2) + p.I2;
    M(0, 1) = M(1, 0) = p.m2 * (p.l2 * p.l2 + p.L1 * p.l2 * c2) + p.I2;
    M(1, 1) = p.m2 * p.l2 * p.l2 + p.I2;
    return M;
}

} // namespace mixform::testing

#endif // MIXFORM_TESTS_ORACLES_HPP
