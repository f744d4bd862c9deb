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

// Classical vector gossip x_j <- x_j + alpha (x_k - x_j) and its exact
// match with the local expectations of quantum gossip.

#pragma once

#include <vector>

#include "qconsensus/gossip.hpp"

namespace qcons {

/// m agent values, each a real vector of common dimension d.
class ClassicalState {
   public:
    /// Throws ValidationError if there are no agents, d == 0, or the
    /// dimensions differ.
    explicit ClassicalState(std::vector<std::vector<double>> values);
    /// Scalar agents (d = 1).
    static ClassicalState scalars(const std::vector<double>& values);

    std::size_t agents() const { return x_.size(); }
    std::size_t dim() const { return x_.front().size(); }
    const std::vector<double>& operator[](std::size_t k) const { return x_[k]; }
    std::vector<double>& operator[](std::size_t k) { return x_[k]; }
    const std::vector<std::vector<double>>& values() const { return x_; }

    std::vector<double> mean() const;
    /// W = sum_k ||x_k - mean||^2.
    double lyapunov() const;
    /// max_k ||x_k - mean||.
    double max_deviation_from_mean() const;

   private:
    std::vector<std::vector<double>> x_;
};

/// Increment form of one gossip step on edge (j, k).
ClassicalState classical_gossip_step(const ClassicalState& x, Edge edge, double alpha);
/// Keep/swap form (1 - alpha) x + alpha swap_{j,k}(x); equal to the
/// increment form up to rounding.
ClassicalState classical_gossip_step_mixture(const ClassicalState& x, Edge edge, double alpha);
/// Weighted mixture over all edges, the classical image of a synchronous
/// quantum step.
ClassicalState classical_synchronous_step(const ClassicalState& x, const InteractionGraph& graph, double alpha);

struct ClassicalTrajectory {
    std::vector<ClassicalState> states;  // states[0] = x0
    std::vector<double> lyapunov;        // W per state
    std::vector<EdgeChoice> edges;       // edges[t] produced states[t + 1]
    /// W(t+1) <= W(t) + 1e-12 at every step.
    bool monotone = true;
    /// First t with max_k ||x_k - mean|| < 1e-10, if any.
    std::optional<std::size_t> consensus_step;
};

/// Replays an explicit edge sequence.
ClassicalTrajectory run_classical_sequence(const ClassicalState& x0, const InteractionGraph& graph, double alpha,
                                           const std::vector<EdgeChoice>& choices);
/// Draws config.steps choices with the same selector as the quantum side.
ClassicalTrajectory run_classical(const ClassicalState& x0, const InteractionGraph& graph, const GossipConfig& config);

struct CorrespondenceReport {
    EvolutionResult quantum;
    ClassicalTrajectory classical;
    std::vector<EdgeChoice> edges;
    /// max over t, l of |z_l(t) - x_l(t)|.
    double max_deviation = 0.0;
    /// (1/m) sum_k z_k(0).
    double predicted_limit = 0.0;
};

/// Evolves rho0 and the classical system x_l(0) = Tr[rho0 sigma^(l)] along
/// one shared edge sequence. Throws CertificateError if the trajectories
/// differ by more than 1e-10.
CorrespondenceReport correspondence_run(const DensityOperator& rho0, const Observable& sigma,
                                        const InteractionGraph& graph, const GossipConfig& config);

}  // namespace qcons
