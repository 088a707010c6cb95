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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "mixform/dynamics.hpp"
#include "mixform/errors.hpp"
#include "oracles.hpp"

namespace mixform {
namespace {

using testing::reference_alpha;
using testing::reference_arm;
using std::numbers::pi;

TEST(Alphas, ReferenceArm) {
    const AlphaParams a = alphas(reference_arm());
    EXPECT_NEAR(a.alpha1, 3.15, 1e-12);
    EXPECT_NEAR(a.alpha2, 0.75, 1e-12);
    EXPECT_NEAR(a.alpha3, 1.125, 1e-12);
}

TEST(Alphas, VanishingSecondLinkMassDecouples) {
    ManipulatorParams p = reference_arm();
    p.m2 = 1e-12;
    p.I2 = 1e-6;
    const AlphaParams a = alphas(p);
    EXPECT_NEAR(a.alpha2, 1e-6, 1e-11);
    EXPECT_NEAR(a.alpha3, 0.0, 1e-11);
}

TEST(Alphas, RejectsInvalidParameters) {
    ManipulatorParams p = reference_arm();
    p.m1 = 0.0;
    EXPECT_THROW(alphas(p), ValidationError);
    p = reference_arm();
    p.l2 = p.L2 * 1.01;
    EXPECT_THROW(alphas(p), ValidationError);
    p = reference_arm();
    p.I1 = std::nan("");
    EXPECT_THROW(alphas(p), ValidationError);
    EXPECT_THROW((AlphaParams{1.0, 1.0, 1.0}.validate()), ValidationError);
}

TEST(Alphas, DeterminantBoundMatchesGridMinimum) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const ManipulatorParams p = testing::random_arm(rng);
        const AlphaParams a = alphas(p);
        double min_det = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= 4000; ++k) {
            const double q2 = -pi + 2.0 * pi * k / 4000.0;
            min_det = std::min(min_det, testing::lagrangian_mass_matrix(p, q2).determinant());
        }
        EXPECT_GT(min_det, 0.0);
        EXPECT_NEAR(min_det, a.alpha1 * a.alpha2 - a.alpha3 * a.alpha3,
                    1e-9 * (1.0 + std::abs(min_det)));
    }
}

TEST(MassMatrix, ReferenceValues) {
    const Eigen::Matrix2d M0 = mass_matrix(reference_alpha(), 0.0);
    EXPECT_NEAR(M0(0, 0), 6.15, 1e-12);
    EXPECT_NEAR(M0(0, 1), 1.875, 1e-12);
    EXPECT_NEAR(M0(1, 0), 1.875, 1e-12);
    EXPECT_NEAR(M0(1, 1), 0.75, 1e-12);

    const Eigen::Matrix2d M90 = mass_matrix(reference_alpha(), pi / 2.0);
    EXPECT_NEAR(M90(0, 0), 3.9, 1e-12);
    EXPECT_NEAR(M90(0, 1), 0.75, 1e-12);
    EXPECT_NEAR(M90(1, 1), 0.75, 1e-12);
}

TEST(MassMatrix, SymmetricPositiveDefiniteAndMatchesLagrangian) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (int trial = 0; trial < 500; ++trial) {
        const ManipulatorParams p = testing::random_arm(rng);
        const double q2 = angle(rng);
        const Eigen::Matrix2d M = mass_matrix(alphas(p), q2);
        EXPECT_EQ(M(0, 1), M(1, 0));
        const Eigen::Vector2d eig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(M).eigenvalues();
        EXPECT_GT(eig.minCoeff(), 0.0);
        EXPECT_LT((M - testing::lagrangian_mass_matrix(p, q2)).norm(), 1e-12 * M.norm());
    }
}

TEST(Coriolis, VanishesAtRestAndWhenArmIsStraight) {
    const AlphaParams a = reference_alpha();
    EXPECT_EQ(coriolis_matrix(a, {{0.3, 1.1}, {0.0, 0.0}}).norm(), 0.0);
    EXPECT_NEAR(coriolis_matrix(a, {{0.3, 0.0}, {2.0, -1.0}}).norm(), 0.0, 1e-15);
    EXPECT_NEAR(coriolis_matrix(a, {{0.3, pi}, {2.0, -1.0}}).norm(), 0.0, 1e-14);
}

TEST(Coriolis, ReferenceValue) {
    const Eigen::Matrix2d C = coriolis_matrix(reference_alpha(), {{0.0, pi / 2.0}, {1.0, 1.0}});
    Eigen::Matrix2d expected;
    expected << -1.0, -2.0, 1.0, 0.0;
    EXPECT_LT((C - 1.125 * expected).norm(), 1e-12);
}

TEST(ForwardDynamics, EquilibriumWithoutForcing) {
    const Eigen::Vector2d qdd = forward_dynamics(reference_alpha(), {{0.4, -0.7}, {0.0, 0.0}}, Eigen::Vector2d::Zero());
    EXPECT_EQ(qdd.norm(), 0.0);
}

TEST(ForwardDynamics, ReferenceLinearSolve) {
    // Frozen from an LU solve of M(0) x = (1, 0).
    const Eigen::Matrix2d M0 = mass_matrix(reference_alpha(), 0.0);
    const Eigen::Vector2d oracle = M0.partialPivLu().solve(Eigen::Vector2d{1.0, 0.0});
    EXPECT_NEAR(oracle(0), 0.6837606837606838, 1e-12);
    EXPECT_NEAR(oracle(1), -1.7094017094017093, 1e-12);

    const Eigen::Vector2d qdd = forward_dynamics(reference_alpha(), {{0.0, 0.0}, {0.0, 0.0}}, {1.0, 0.0});
    EXPECT_NEAR(qdd(0), 0.6837606837606838, 1e-12);
    EXPECT_NEAR(qdd(1), -1.7094017094017093, 1e-12);
}

TEST(ForwardDynamics, ResidualAndAgreementWithLuSolve) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-pi, pi), rate(-5.0, 5.0), torque(-100.0, 100.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const AlphaParams a = alphas(testing::random_arm(rng));
        const JointState s{{angle(rng), angle(rng)}, {rate(rng), rate(rng)}};
        const Eigen::Vector2d u{torque(rng), torque(rng)};
        const Eigen::Vector2d qdd = forward_dynamics(a, s, u);
        const Eigen::Matrix2d M = mass_matrix(a, s.q(1));
        const Eigen::Vector2d rhs = u - coriolis_matrix(a, s) * s.qdot;
        EXPECT_LE((M * qdd - rhs).norm(), 1e-12 * (1.0 + u.norm() + rhs.norm()));
        const Eigen::Vector2d lu = M.partialPivLu().solve(rhs);
        EXPECT_LE((qdd - lu).norm(), 1e-12 * (1.0 + lu.norm()));
    }
}

TEST(ForwardDynamics, RejectsNonFiniteInput) {
    const double nan = std::nan("");
    EXPECT_THROW(forward_dynamics(reference_alpha(), {{nan, 0.0}, {0.0, 0.0}}, Eigen::Vector2d::Zero()),
                 NumericInputError);
    EXPECT_THROW(forward_dynamics(reference_alpha(), {{0.0, 0.0}, {0.0, 0.0}}, {INFINITY, 0.0}),
                 NumericInputError);
}

TEST(SkewSymmetry, AnalyticResidualIsRoundoff) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(-pi, pi), rate(-5.0, 5.0);
    const AlphaParams a = reference_alpha();
    for (int trial = 0; trial < 1000; ++trial) {
        const JointState s{{angle(rng), angle(rng)}, {rate(rng), rate(rng)}};
        EXPECT_LE(skew_residual(a, s), 1e-12);
    }
    EXPECT_EQ(skew_residual(a, {{0.2, 0.9}, {0.0, 0.0}}), 0.0);
}

TEST(SkewSymmetry, FiniteDifferenceMassDerivative) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> angle(-pi, pi), rate(-5.0, 5.0);
    const AlphaParams a = reference_alpha();
    for (int trial = 0; trial < 200; ++trial) {
        const JointState s{{angle(rng), angle(rng)}, {rate(rng), rate(rng)}};
        // Mdot along the motion, by central difference in time.
        const double h = 1e-6;
        const Eigen::Matrix2d Mdot =
            (mass_matrix(a, s.q(1) + h * s.qdot(1)) - mass_matrix(a, s.q(1) - h * s.qdot(1))) / (2.0 * h);
        const Eigen::Matrix2d S = Mdot - 2.0 * coriolis_matrix(a, s);
        EXPECT_LE((S + S.transpose()).norm(), 1e-6);
    }
}

} // namespace
} // namespace mixform
