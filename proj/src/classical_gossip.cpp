// Copyright 2026 The qconsensus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qconsensus/classical_gossip.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qconsensus/errors.hpp"

namespace qcons {

namespace {

void check_edge(const ClassicalState& x, Edge e) {
    if (e.a == e.b || e.a >= x.agents() || e.b >= x.agents()) {
        throw ValidationError("classical gossip: invalid edge (" + std::to_string(e.a) + ", " +
                              std::to_string(e.b) + ") for " + std::to_string(x.agents()) + " agents");
    }
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("classical gossip: alpha must lie in (0, 1)");
    }
}

}  // namespace

ClassicalState::ClassicalState(std::vector<std::vector<double>> values) : x_(std::move(values)) {
    if (x_.empty()) {
        throw ValidationError("classical state: no agents");
    }
    if (x_.front().empty()) {
        throw ValidationError("classical state: agent values must have dimension >= 1");
    }
    for (std::size_t k = 1; k < x_.size(); ++k) {
        if (x_[k].size() != x_.front().size()) {
            throw ValidationError("classical state: agent " + std::to_string(k) + " has dimension " +
                                  std::to_string(x_[k].size()) + ", expected " +
                                  std::to_string(x_.front().size()));
        }
    }
}

ClassicalState ClassicalState::scalars(const std::vector<double>& values) {
    std::vector<std::vector<double>> x;
    x.reserve(values.size());
    for (double v : values) x.push_back({v});
    return ClassicalState(std::move(x));
}

std::vector<double> ClassicalState::mean() const {
    std::vector<double> out(dim(), 0.0);
    for (const auto& xk : x_) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += xk[i];
    }
    for (auto& v : out) v /= static_cast<double>(x_.size());
    return out;
}

double ClassicalState::lyapunov() const {
    const auto mu = mean();
    double w = 0.0;
    for (const auto& xk : x_) {
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double d = xk[i] - mu[i];
            w += d * d;
        }
    }
    return w;
}

double ClassicalState::max_deviation_from_mean() const {
    const auto mu = mean();
    double out = 0.0;
    for (const auto& xk : x_) {
        double sq = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double d = xk[i] - mu[i];
            sq += d * d;
        }
        out = std::max(out, std::sqrt(sq));
    }
    return out;
}

ClassicalState classical_gossip_step(const ClassicalState& x, Edge edge, double alpha) {
    check_alpha(alpha);
    check_edge(x, edge);
    ClassicalState out = x;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        const double xj = x[edge.a][i];
        const double xk = x[edge.b][i];
        out[edge.a][i] = xj + alpha * (xk - xj);
        out[edge.b][i] = xk + alpha * (xj - xk);
    }
    return out;
}

ClassicalState classical_gossip_step_mixture(const ClassicalState& x, Edge edge, double alpha) {
    check_alpha(alpha);
    check_edge(x, edge);
    ClassicalState out = x;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        out[edge.a][i] = (1.0 - alpha) * x[edge.a][i] + alpha * x[edge.b][i];
        out[edge.b][i] = (1.0 - alpha) * x[edge.b][i] + alpha * x[edge.a][i];
    }
    return out;
}

ClassicalState classical_synchronous_step(const ClassicalState& x, const InteractionGraph& graph, double alpha) {
    check_alpha(alpha);
    if (x.agents() != graph.shape().sites()) {
        throw ValidationError("classical gossip: agent count does not match the graph");
    }
    ClassicalState out = x;
    for (std::size_t k = 0; k < x.agents(); ++k) {
        for (auto& v : out[k]) v = 0.0;
    }
    // Each edge term is (1 - alpha) x + alpha swap_e(x), weighted by q_e.
    for (std::size_t e = 0; e < graph.edges().size(); ++e) {
        const auto term = classical_gossip_step_mixture(x, graph.edges()[e], alpha);
        const double q = graph.weights()[e];
        for (std::size_t k = 0; k < x.agents(); ++k) {
            for (std::size_t i = 0; i < x.dim(); ++i) out[k][i] += q * term[k][i];
        }
    }
    return graph.edges().empty() ? x : out;
}

ClassicalTrajectory run_classical_sequence(const ClassicalState& x0, const InteractionGraph& graph, double alpha,
                                           const std::vector<EdgeChoice>& choices) {
    check_alpha(alpha);
    if (x0.agents() != graph.shape().sites()) {
        throw ValidationError("classical gossip: agent count does not match the graph");
    }
    ClassicalTrajectory traj;
    traj.states.push_back(x0);
    traj.lyapunov.push_back(x0.lyapunov());
    if (x0.max_deviation_from_mean() < 1e-10) traj.consensus_step = 0;
    for (std::size_t t = 0; t < choices.size(); ++t) {
        const auto& cur = traj.states.back();
        auto next = choices[t] ? classical_gossip_step(cur, graph.edges().at(*choices[t]), alpha)
                               : classical_synchronous_step(cur, graph, alpha);
        const double w = next.lyapunov();
        if (w > traj.lyapunov.back() + 1e-12) traj.monotone = false;
        if (!traj.consensus_step && next.max_deviation_from_mean() < 1e-10) traj.consensus_step = t + 1;
        traj.lyapunov.push_back(w);
        traj.edges.push_back(choices[t]);
        traj.states.push_back(std::move(next));
    }
    return traj;
}

ClassicalTrajectory run_classical(const ClassicalState& x0, const InteractionGraph& graph, const GossipConfig& config) {
    config.validate(graph);
    return run_classical_sequence(x0, graph, config.alpha, edge_sequence(graph, config, config.steps));
}

CorrespondenceReport correspondence_run(const DensityOperator& rho0, const Observable& sigma,
                                        const InteractionGraph& graph, const GossipConfig& config) {
    config.validate(graph);
    CorrespondenceReport report;
    report.edges = edge_sequence(graph, config, config.steps);
    report.quantum = evolve_sequence(rho0, graph, config.alpha, config.strategy, report.edges, sigma);

    const auto& z0 = report.quantum.record.rows.front().z;
    report.classical = run_classical_sequence(ClassicalState::scalars(z0), graph, config.alpha, report.edges);
    double sum = 0.0;
    for (double z : z0) sum += z;
    report.predicted_limit = sum / static_cast<double>(z0.size());

    for (std::size_t t = 0; t < report.quantum.record.rows.size(); ++t) {
        const auto& z = report.quantum.record.rows[t].z;
        const auto& x = report.classical.states[t];
        for (std::size_t l = 0; l < z.size(); ++l) {
            report.max_deviation = std::max(report.max_deviation, std::abs(z[l] - x[l][0]));
        }
    }
    if (!(report.max_deviation <= 1e-10)) {
        throw CertificateError("correspondence: quantum and classical trajectories differ by " +
                               std::to_string(report.max_deviation));
    }
    return report;
}

}  // namespace qcons
