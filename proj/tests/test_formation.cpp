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
#include <unsupported/Eigen/KroneckerProduct>

#include "mixform/errors.hpp"
#include "mixform/formation.hpp"
#include "oracles.hpp"

namespace mixform {
namespace {

using std::numbers::pi;

FormationSpec square_graph() {
    const double d = 0.4;
    return {4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}}, {d, d, d, d, d * std::sqrt(2.0)}};
}

// Desired square, counterclockwise from agent 1.
Eigen::VectorXd square_shape() {
    Eigen::VectorXd x(8);
    x << 0.0, 0.0, 0.4, 0.0, 0.4, 0.4, 0.0, 0.4;
    return x;
}

Eigen::VectorXd rigid_motion(const Eigen::VectorXd& x, double theta, const Eigen::Vector2d& b) {
    const Eigen::Matrix2d R = Eigen::Rotation2Dd(theta).toRotationMatrix();
    Eigen::VectorXd y(x.size());
    for (Eigen::Index i = 0; i < x.size() / 2; ++i) y.segment<2>(2 * i) = R * x.segment<2>(2 * i) + b;
    return y;
}

Eigen::VectorXd random_positions(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    Eigen::VectorXd x(2 * n);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = pos(rng);
    return x;
}

TEST(Incidence, SquareGraph) {
    Eigen::MatrixXd expected(4, 5);
    expected << 1, 0, 0, -1, 1,
               -1, 1, 0, 0, 0,
                0, -1, 1, 0, -1,
                0, 0, -1, 1, 0;
    EXPECT_EQ(incidence_matrix(square_graph()), expected);
}

TEST(Incidence, SingleEdgeAndColumnSums) {
    const Eigen::MatrixXd B = incidence_matrix({2, {{0, 1}}, {1.0}});
    EXPECT_EQ(B(0, 0), 1.0);
    EXPECT_EQ(B(1, 0), -1.0);

    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng() % 8;
        FormationSpec spec{n, {}, {}};
        for (std::size_t k = 0; k < 1 + rng() % 12; ++k) {
            const std::size_t t = rng() % n;
            const std::size_t h = (t + 1 + rng() % (n - 1)) % n;
            spec.edges.push_back({t, h});
            spec.d_star.push_back(1.0);
        }
        const Eigen::MatrixXd Bm = incidence_matrix(spec);
        EXPECT_EQ(Bm.colwise().sum().cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ(Bm.cwiseAbs().colwise().sum().minCoeff(), 2.0);
    }
}

TEST(Incidence, NeighborsFollowEdges) {
    const FormationSpec spec = square_graph();
    EXPECT_EQ(spec.neighbors(0), (std::vector<std::size_t>{1, 2, 3}));
    EXPECT_EQ(spec.neighbors(1), (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(spec.incident_edges(3), (std::vector<std::size_t>{2, 3}));
}

TEST(FormationSpecValidation, RejectsMalformedGraphs) {
    EXPECT_THROW((FormationSpec{2, {{0, 0}}, {1.0}}.validate()), ValidationError);
    EXPECT_THROW((FormationSpec{2, {{0, 2}}, {1.0}}.validate()), ValidationError);
    EXPECT_THROW((FormationSpec{2, {{0, 1}}, {0.0}}.validate()), ValidationError);
    EXPECT_THROW((FormationSpec{2, {{0, 1}}, {-1.0}}.validate()), ValidationError);
    EXPECT_THROW((FormationSpec{2, {{0, 1}}, {1.0, 2.0}}.validate()), ValidationError);
    EXPECT_THROW(incidence_matrix({2, {{0, 0}}, {1.0}}), ValidationError);
    EXPECT_NO_THROW(square_graph().validate());
}

TEST(EdgeState, TwoAgentExample) {
    const FormationSpec spec{2, {{0, 1}}, {2.0}};
    const Eigen::VectorXd x = (Eigen::VectorXd(4) << 0.0, 0.0, 1.0, 0.0).finished();
    const EdgeState es = edge_state(spec, x);
    EXPECT_EQ(es.z[0], Eigen::Vector2d(-1.0, 0.0));
    EXPECT_EQ(es.e(0), -3.0);
    EXPECT_EQ(potential(es.e), 4.5);
    const Eigen::VectorXd g = gradient(spec, x);
    EXPECT_EQ(g, (Eigen::VectorXd(4) << 6.0, 0.0, -6.0, 0.0).finished());
}

TEST(EdgeState, ZeroAtDesiredShape) {
    const EdgeState es = edge_state(square_graph(), square_shape());
    EXPECT_LE(es.e.cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE(potential(es.e), 1e-30);
}

TEST(EdgeState, DefinitionIdentities) {
    std::mt19937_64 rng(2);
    const FormationSpec spec = square_graph();
    const Eigen::MatrixXd B = incidence_matrix(spec);
    const Eigen::MatrixXd Bbar = Eigen::kroneckerProduct(B, Eigen::Matrix2d::Identity()).eval();
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::VectorXd x = random_positions(rng, 4);
        const EdgeState es = edge_state(spec, x);
        const Eigen::VectorXd z = Bbar.transpose() * x;
        for (std::size_t k = 0; k < spec.edges.size(); ++k) {
            EXPECT_NEAR((es.z[k] - z.segment<2>(2 * k)).norm(), 0.0, 1e-14);
            EXPECT_NEAR(es.z[k].squaredNorm() - es.e(k), spec.d_star[k] * spec.d_star[k], 1e-12);
        }
        EXPECT_NEAR(potential(es.e), 0.5 * es.e.squaredNorm(), 1e-12);
    }
}

TEST(EdgeState, RejectsWrongSize) {
    EXPECT_THROW(edge_state(square_graph(), Eigen::VectorXd::Zero(6)), ValidationError);
}

TEST(Gradient, MatchesFiniteDifferenceOfPotential) {
    std::mt19937_64 rng(3);
    const FormationSpec spec = square_graph();
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::VectorXd x = random_positions(rng, 4);
        const Eigen::MatrixXd fd = testing::numeric_jacobian(
            [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
                return Eigen::VectorXd::Constant(1, potential(edge_state(spec, v).e));
            },
            x, 1e-6);
        const Eigen::VectorXd g = gradient(spec, x);
        EXPECT_LE((g - fd.row(0).transpose()).cwiseAbs().maxCoeff(), 1e-6 * (1.0 + g.norm()));
    }
}

TEST(Gradient, VanishesOnTheDesiredShapeSet) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> angle(-pi, pi), shift(-10.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::VectorXd x = rigid_motion(square_shape(), angle(rng), {shift(rng), shift(rng)});
        EXPECT_LE(gradient(square_graph(), x).norm(), 1e-9);
    }
}

TEST(Gradient, TranslationInvariant) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> shift(-10.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::VectorXd x = random_positions(rng, 4);
        const Eigen::VectorXd moved = rigid_motion(x, 0.0, {shift(rng), shift(rng)});
        const Eigen::VectorXd g = gradient(square_graph(), x);
        EXPECT_LE((gradient(square_graph(), moved) - g).norm(), 1e-10 * (1.0 + g.norm()));
    }
}

TEST(Rigidity, SquareWithDiagonalIsInfinitesimallyRigid) {
    EXPECT_EQ(rigidity_rank(square_graph(), square_shape()), 5);
    EXPECT_EQ(rigidity_rank(square_graph(), Eigen::VectorXd::Zero(8)), 0);
    const FormationSpec triangle{3, {{0, 1}, {1, 2}, {2, 0}}, {1.0, 1.0, 1.0}};
    const Eigen::VectorXd x = (Eigen::VectorXd(6) << 0.0, 0.0, 1.3, 0.1, 0.4, 0.9).finished();
    EXPECT_EQ(rigidity_rank(triangle, x), 3);
    // Without the diagonal the square flexes.
    FormationSpec ring = square_graph();
    ring.edges.pop_back();
    ring.d_star.pop_back();
    EXPECT_EQ(rigidity_rank(ring, square_shape()), 4);
}

TEST(Rigidity, ReducedGramianPositiveDefinite) {
    const Eigen::MatrixXd R = rigidity_matrix(square_graph(), square_shape());
    ASSERT_EQ(R.rows(), 5);
    ASSERT_EQ(R.cols(), 8);
    // R = D(z)^T Bbar^T, so R R^T = D^T Bbar^T Bbar D.
    const FormationSpec spec = square_graph();
    const EdgeState es = edge_state(spec, square_shape());
    const Eigen::MatrixXd Bbar =
        Eigen::kroneckerProduct(incidence_matrix(spec), Eigen::Matrix2d::Identity()).eval();
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(10, 5);
    for (Eigen::Index k = 0; k < 5; ++k) D.block<2, 1>(2 * k, k) = 2.0 * es.z[k];
    const Eigen::MatrixXd G = D.transpose() * Bbar.transpose() * Bbar * D;
    EXPECT_LE((R * R.transpose() - G).norm(), 1e-12);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues().minCoeff(), 1e-3);
}

} // namespace
} // namespace mixform
