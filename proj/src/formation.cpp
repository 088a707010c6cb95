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

#include "mixform/formation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixform/errors.hpp"

namespace mixform {

void FormationSpec::validate() const {
    if (n_agents == 0) {
        throw ValidationError("formation needs at least one agent");
    }
    if (d_star.size() != edges.size()) {
        throw ValidationError("formation has " + std::to_string(edges.size()) + " edges but " +
                              std::to_string(d_star.size()) + " desired distances");
    }
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const Edge& edge = edges[k];
        if (edge.tail >= n_agents || edge.head >= n_agents) {
            throw ValidationError("edge " + std::to_string(k + 1) + " references an undeclared agent");
        }
        if (edge.tail == edge.head) {
            throw ValidationError("edge " + std::to_string(k + 1) + " is a self-loop");
        }
        if (!std::isfinite(d_star[k]) || d_star[k] <= 0.0) {
            throw ValidationError("desired distance of edge " + std::to_string(k + 1) +
                                  " must be finite and strictly positive");
        }
    }
}

std::vector<std::size_t> FormationSpec::incident_edges(std::size_t agent) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (edges[k].tail == agent || edges[k].head == agent) {
            out.push_back(k);
        }
    }
    return out;
}

std::vector<std::size_t> FormationSpec::neighbors(std::size_t agent) const {
    std::vector<std::size_t> out;
    for (const Edge& edge : edges) {
        if (edge.tail == agent) {
            out.push_back(edge.head);
        } else if (edge.head == agent) {
            out.push_back(edge.tail);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Eigen::MatrixXd incidence_matrix(const FormationSpec& spec) {
    spec.validate();
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spec.n_agents),
                                              static_cast<Eigen::Index>(spec.edges.size()));
    for (std::size_t k = 0; k < spec.edges.size(); ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        B(static_cast<Eigen::Index>(spec.edges[k].tail), col) = 1.0;
        B(static_cast<Eigen::Index>(spec.edges[k].head), col) = -1.0;
    }
    return B;
}

namespace {

Eigen::Vector2d position(const Eigen::VectorXd& x, std::size_t i) {
    return x.segment<2>(static_cast<Eigen::Index>(2 * i));
}

void check_stacked(const FormationSpec& spec, const Eigen::VectorXd& x) {
    if (x.size() != static_cast<Eigen::Index>(2 * spec.n_agents)) {
        throw ValidationError("stacked position vector has size " + std::to_string(x.size()) +
                              ", expected " + std::to_string(2 * spec.n_agents));
    }
}

} // namespace

EdgeState edge_state(const FormationSpec& spec, const Eigen::VectorXd& x) {
    check_stacked(spec, x);
    EdgeState s;
    s.z.reserve(spec.edges.size());
    s.e.resize(static_cast<Eigen::Index>(spec.edges.size()));
    for (std::size_t k = 0; k < spec.edges.size(); ++k) {
        const Eigen::Vector2d zk = position(x, spec.edges[k].tail) - position(x, spec.edges[k].head);
        s.z.push_back(zk);
        s.e(static_cast<Eigen::Index>(k)) = zk.squaredNorm() - spec.d_star[k] * spec.d_star[k];
    }
    return s;
}

double potential(const Eigen::VectorXd& e) {
    return 0.5 * e.squaredNorm();
}

Eigen::VectorXd gradient(const FormationSpec& spec, const Eigen::VectorXd& x) {
    const EdgeState s = edge_state(spec, x);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
    for (std::size_t k = 0; k < spec.edges.size(); ++k) {
        const Eigen::Vector2d term = 2.0 * s.z[k] * s.e(static_cast<Eigen::Index>(k));
        g.segment<2>(static_cast<Eigen::Index>(2 * spec.edges[k].tail)) += term;
        g.segment<2>(static_cast<Eigen::Index>(2 * spec.edges[k].head)) -= term;
    }
    return g;
}

Eigen::MatrixXd rigidity_matrix(const FormationSpec& spec, const Eigen::VectorXd& x) {
    const EdgeState s = edge_state(spec, x);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spec.edges.size()), x.size());
    for (std::size_t k = 0; k < spec.edges.size(); ++k) {
        const auto row = static_cast<Eigen::Index>(k);
        R.block<1, 2>(row, static_cast<Eigen::Index>(2 * spec.edges[k].tail)) = 2.0 * s.z[k].transpose();
        R.block<1, 2>(row, static_cast<Eigen::Index>(2 * spec.edges[k].head)) = -2.0 * s.z[k].transpose();
    }
    return R;
}

int rigidity_rank(const FormationSpec& spec, const Eigen::VectorXd& x, double rel_threshold) {
    const Eigen::MatrixXd R = rigidity_matrix(spec, x);
    if (R.size() == 0) {
        return 0;
    }
    const Eigen::VectorXd sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(R).singularValues();
    const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
    if (sigma_max == 0.0) {
        return 0;
    }
    return static_cast<int>((sigma.array() > rel_threshold * sigma_max).count());
}

} // namespace mixform
