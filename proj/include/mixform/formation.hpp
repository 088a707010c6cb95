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

#ifndef MIXFORM_FORMATION_HPP
#define MIXFORM_FORMATION_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace mixform {

/// Ordered edge; z_k = x_tail - x_head. Vertices are 0-based.
struct Edge {
    std::size_t tail = 0;
    std::size_t head = 0;

    bool operator==(const Edge&) const = default;
};

struct FormationSpec {
    std::size_t n_agents = 0;
    std::vector<Edge> edges;
    std::vector<double> d_star;  // desired distance per edge, in edge order

    void validate() const;

    /// Indices of edges that touch @p agent, in declaration order.
    std::vector<std::size_t> incident_edges(std::size_t agent) const;

    /// Agents sharing an edge with @p agent.
    std::vector<std::size_t> neighbors(std::size_t agent) const;

    bool operator==(const FormationSpec&) const = default;
};

struct EdgeState {
    std::vector<Eigen::Vector2d> z;
    Eigen::VectorXd e;  // |z_k|^2 - d_k^2
};

/// N x |E| matrix with +1 at the tail row and -1 at the head row of each column.
Eigen::MatrixXd incidence_matrix(const FormationSpec& spec);

/// @p x stacks end-effector positions as (x1, y1, x2, y2, ...).
EdgeState edge_state(const FormationSpec& spec, const Eigen::VectorXd& x);

/// 0.5 * sum e_k^2.
double potential(const Eigen::VectorXd& e);

/// Stacked dV/dx; block i is sum_k b_ik * 2 z_k * e_k.
Eigen::VectorXd gradient(const FormationSpec& spec, const Eigen::VectorXd& x);

/// |E| x 2N Jacobian of the squared edge lengths, row k holds 2 z_k^T (tail) and -2 z_k^T (head).
Eigen::MatrixXd rigidity_matrix(const FormationSpec& spec, const Eigen::VectorXd& x);

/// Numerical rank of rigidity_matrix, singular values below rel_threshold * sigma_max dropped.
int rigidity_rank(const FormationSpec& spec, const Eigen::VectorXd& x,
                  double rel_threshold = 1e-9);

} // namespace mixform

#endif // MIXFORM_FORMATION_HPP
