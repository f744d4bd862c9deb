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

// Quantum gossip: the pairwise channel
//
//   E_{j,k}(rho) = (1 - alpha) rho + alpha U_{(j,k)} rho U_{(j,k)}^dag,
//
// edge-selection strategies, trajectories and the convergence experiments
// built on them.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qconsensus/quantum_state.hpp"
#include "qconsensus/rng.hpp"

namespace qcons {

struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected interaction graph over the sites of a network, with edge
/// selection weights q_{j,k}.
class InteractionGraph {
   public:
    /// Weights default to uniform. Throws ValidationError on self loops,
    /// out-of-range or duplicate edges, non-positive weights, or weights not
    /// summing to 1 within 1e-12.
    InteractionGraph(NetworkShape shape, std::vector<Edge> edges, std::vector<double> weights = {});

    /// Path 0-1-2-...-(m-1).
    static InteractionGraph path(const NetworkShape& shape);
    static InteractionGraph complete(const NetworkShape& shape);

    const NetworkShape& shape() const { return shape_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<double>& weights() const { return weights_; }
    /// Breadth-first reachability of every site from site 0.
    bool connected() const;

   private:
    NetworkShape shape_;
    std::vector<Edge> edges_;
    std::vector<double> weights_;
};

enum class Strategy { kCyclic, kRandom, kSynchronous, kExpected };

std::string_view to_string(Strategy s);
/// "cyclic", "random", "synchronous", "expected".
std::optional<Strategy> parse_strategy(std::string_view name);

struct GossipConfig {
    double alpha = 0.5;
    Strategy strategy = Strategy::kCyclic;
    std::size_t steps = 0;
    std::uint64_t seed = 0;
    /// Edge indices visited per cycle; empty means the graph's edge order.
    std::vector<std::size_t> cycle_order;
    /// Stop early once the distance to the symmetrized state drops below
    /// kConvergedGap.
    bool stop_when_converged = false;

    static constexpr double kConvergedGap = 1e-10;

    /// Throws ValidationError naming the offending field.
    void validate(const InteractionGraph& graph) const;
};

/// One scheduling decision: a single edge index, or nullopt for the
/// weighted mixture over all edges (synchronous and expected strategies).
using EdgeChoice = std::optional<std::size_t>;

/// Deterministic edge selector. Random selection draws u ~ U[0,1) from
/// Rng(seed) and picks the first edge whose cumulative weight exceeds u.
class EdgeSelector {
   public:
    EdgeSelector(const InteractionGraph& graph, const GossipConfig& config);
    EdgeChoice next();

   private:
    Strategy strategy_;
    std::vector<std::size_t> order_;
    std::vector<double> cumulative_;
    std::size_t position_ = 0;
    Rng rng_;
};

/// The first `steps` choices of an EdgeSelector, for replaying the same
/// realization on several evolutions.
std::vector<EdgeChoice> edge_sequence(const InteractionGraph& graph, const GossipConfig& config, std::size_t steps);

/// Kraus form {sqrt(1-alpha) I, sqrt(alpha) U_{(j,k)}}. Throws
/// ValidationError if alpha is outside (0, 1) or j == k.
KrausChannel gossip_channel(Edge edge, double alpha, const NetworkShape& shape);

/// sum_e q_e E_e, in Kraus form {sqrt(1-alpha) I, sqrt(alpha q_e) U_e}.
KrausChannel synchronous_channel(const InteractionGraph& graph, double alpha);

/// One cycle E_{order[T-1]} o ... o E_{order[0]} in Kraus form; all 2^T
/// products are enumerated. Throws ValidationError for an empty order or
/// one that misses an edge, and ResourceError for T > kMaxCycleKrausLength.
inline constexpr std::size_t kMaxCycleKrausLength = 12;
KrausChannel cycle_map(const InteractionGraph& graph, const std::vector<std::size_t>& order, double alpha);

/// Applies one gossip step in place of a Kraus sum (index relabeling only).
ComplexMatrix gossip_step(const ComplexMatrix& rho, Edge edge, double alpha, const NetworkShape& shape);
/// One step of the weighted mixture over all edges.
ComplexMatrix synchronous_step(const ComplexMatrix& rho, const InteractionGraph& graph, double alpha);

struct TrajectoryRow {
    std::size_t t = 0;
    /// Edge applied to reach this row; nullopt for t = 0 and for mixture steps.
    EdgeChoice edge;
    std::vector<double> z;  // Tr[rho_t sigma^(l)] per site
    double s_expectation = 0.0;
    double ssc_gap = 0.0;     // ||rho_t - rho_*||_F
    double smc_defect = 0.0;  // 1 - Tr[Pi_sym rho_t]
};

struct TrajectoryRecord {
    Strategy strategy = Strategy::kCyclic;
    std::vector<TrajectoryRow> rows;  // rows[0] is the initial state
};

struct EvolutionResult {
    TrajectoryRecord record;
    ComplexMatrix final_state;
    /// rho_* = twirl(rho_0), the predicted limit.
    ComplexMatrix symmetrized;
    bool converged = false;
    /// "converged" or "steps_exhausted".
    std::string termination;
    std::vector<std::string> warnings;
};

/// Evolves rho0 under `config`, tracking z_l for sigma, Tr[S rho] for the
/// given S (default (1/m) sum_l sigma^(l)), the SSC gap and the SMC defect.
/// A disconnected graph adds a warning but is not an error.
EvolutionResult evolve(const DensityOperator& rho0, const InteractionGraph& graph, const GossipConfig& config,
                       const Observable& sigma, const std::optional<ComplexMatrix>& s = std::nullopt);

/// Replays an explicit edge sequence.
EvolutionResult evolve_sequence(const DensityOperator& rho0, const InteractionGraph& graph, double alpha,
                                Strategy label, const std::vector<EdgeChoice>& choices, const Observable& sigma,
                                const std::optional<ComplexMatrix>& s = std::nullopt,
                                bool stop_when_converged = false);

struct DualFixedPointReport {
    /// max over edges of ||E_e^dag(S) - S||_F
    double max_edge_drift = 0.0;
    bool invariant = false;  // max_edge_drift < 1e-12
};

/// Checks that S is left invariant by the dual of every edge channel.
/// Throws ValidationError if S is not permutation invariant.
DualFixedPointReport dual_fixed_point_check(const InteractionGraph& graph, double alpha, const ComplexMatrix& s);

/// Heisenberg-picture composition E_{c_1}^dag o ... o E_{c_T}^dag (x)
/// for the choice sequence c_1..c_T.
ComplexMatrix iterate_dual(const InteractionGraph& graph, double alpha, const std::vector<EdgeChoice>& choices,
                           const ComplexMatrix& x);

struct SAverageSample {
    double initial_expectation = 0.0;  // Tr[S rho_0]
    double max_conservation_drift = 0.0;
    std::vector<double> local_limits;  // Tr[sigma^(l) rho_T]
    double limit_mismatch = 0.0;       // max_l |local_limits[l] - Tr[S rho_0]|
    bool converged = false;
};

struct SAverageReport {
    bool decomposable = false;
    /// ||S - (1/m) sum_l sigma^(l)||_F for the least-squares sigma.
    double residual = 0.0;
    ComplexMatrix sigma;
    std::vector<SAverageSample> samples;
    bool conserved = false;
    bool average_consensus = false;
};

/// Tests whether S = (1/m) sum_l sigma^(l) for some local sigma and runs
/// cyclic gossip from each sample to check where the local expectations
/// go. Throws ValidationError if S is not permutation invariant.
SAverageReport s_average_check(const ComplexMatrix& s, const InteractionGraph& graph, double alpha,
                               const std::vector<DensityOperator>& samples, std::size_t max_steps = 20000);

struct ProbabilityOneReport {
    std::size_t trials = 0;
    std::size_t successes = 0;
    double probability = 0.0;
    /// Largest single-step increase of ||rho_t - rho_*||_F seen (<= 0 when
    /// the distance never grew).
    double max_distance_increase = 0.0;
    std::vector<double> final_squared_distances;
};

/// Runs `trials` random-strategy trajectories, each with its own stream
/// derive_stream_seed(seed, trial), and counts those with
/// Tr[(rho_T - rho_*)^2] <= eps at T = horizon. Throws CertificateError if
/// the Frobenius distance to rho_* grows by more than 1e-12 in any step.
ProbabilityOneReport probability_one_convergence_experiment(const InteractionGraph& graph, double alpha,
                                                            const DensityOperator& rho0, double eps,
                                                            std::size_t trials, std::size_t horizon,
                                                            std::uint64_t seed);

}  // namespace qcons
