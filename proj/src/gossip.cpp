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

#include "qconsensus/gossip.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/QR>

#include "qconsensus/consensus.hpp"
#include "qconsensus/errors.hpp"

namespace qcons {

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("alpha must lie in the open interval (0, 1), got " + std::to_string(alpha));
    }
}

Permutation swap_of(Edge e, const NetworkShape& shape) { return Permutation::transposition(shape.sites(), e.a, e.b); }

}  // namespace

InteractionGraph::InteractionGraph(NetworkShape shape, std::vector<Edge> edges, std::vector<double> weights)
    : shape_(shape), edges_(std::move(edges)), weights_(std::move(weights)) {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        auto& e = edges_[i];
        if (e.a >= shape_.sites() || e.b >= shape_.sites()) {
            throw ValidationError("edge " + std::to_string(i) + " references a site outside 0.." +
                                  std::to_string(shape_.sites() - 1));
        }
        if (e.a == e.b) {
            throw ValidationError("edge " + std::to_string(i) + " is a self loop");
        }
        if (e.a > e.b) std::swap(e.a, e.b);
        for (std::size_t j = 0; j < i; ++j) {
            if (edges_[j] == e) {
                throw ValidationError("edge " + std::to_string(i) + " duplicates edge " + std::to_string(j));
            }
        }
    }
    if (weights_.empty()) {
        weights_.assign(edges_.size(), edges_.empty() ? 0.0 : 1.0 / static_cast<double>(edges_.size()));
        return;
    }
    if (weights_.size() != edges_.size()) {
        throw ValidationError("graph has " + std::to_string(edges_.size()) + " edges but " +
                              std::to_string(weights_.size()) + " weights");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!(weights_[i] > 0.0)) {
            throw ValidationError("weight " + std::to_string(i) + " must be positive");
        }
        total += weights_[i];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidationError("edge weights sum to " + std::to_string(total) + ", expected 1");
    }
}

InteractionGraph InteractionGraph::path(const NetworkShape& shape) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < shape.sites(); ++i) {
        edges.push_back({i, i + 1});
    }
    return InteractionGraph(shape, std::move(edges));
}

InteractionGraph InteractionGraph::complete(const NetworkShape& shape) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < shape.sites(); ++i) {
        for (std::size_t j = i + 1; j < shape.sites(); ++j) {
            edges.push_back({i, j});
        }
    }
    return InteractionGraph(shape, std::move(edges));
}

bool InteractionGraph::connected() const {
    const auto m = shape_.sites();
    std::vector<std::vector<std::size_t>> adj(m);
    for (const auto& e : edges_) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    std::vector<bool> seen(m, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        for (auto w : adj[v]) {
            if (!seen[w]) {
                seen[w] = true;
                ++reached;
                queue.push_back(w);
            }
        }
    }
    return reached == m;
}

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::kCyclic:
            return "cyclic";
        case Strategy::kRandom:
            return "random";
        case Strategy::kSynchronous:
            return "synchronous";
        case Strategy::kExpected:
            return "expected";
    }
    return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
    if (name == "cyclic") return Strategy::kCyclic;
    if (name == "random") return Strategy::kRandom;
    if (name == "synchronous") return Strategy::kSynchronous;
    if (name == "expected") return Strategy::kExpected;
    return std::nullopt;
}

void GossipConfig::validate(const InteractionGraph& graph) const {
    require_alpha(alpha);
    const auto edge_count = graph.edges().size();
    for (std::size_t i = 0; i < cycle_order.size(); ++i) {
        if (cycle_order[i] >= edge_count) {
            throw ValidationError("cycle_order[" + std::to_string(i) + "] = " + std::to_string(cycle_order[i]) +
                                  " is not an edge index");
        }
    }
    if (strategy == Strategy::kCyclic && !cycle_order.empty()) {
        std::vector<bool> covered(edge_count, false);
        for (auto e : cycle_order) covered[e] = true;
        if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
            throw ValidationError("cycle_order must visit every edge at least once");
        }
    }
}

EdgeSelector::EdgeSelector(const InteractionGraph& graph, const GossipConfig& config)
    : strategy_(config.strategy), order_(config.cycle_order), rng_(config.seed) {
    config.validate(graph);
    if (order_.empty()) {
        order_.resize(graph.edges().size());
        std::iota(order_.begin(), order_.end(), 0);
    }
    double acc = 0.0;
    for (double w : graph.weights()) {
        acc += w;
        cumulative_.push_back(acc);
    }
}

EdgeChoice EdgeSelector::next() {
    switch (strategy_) {
        case Strategy::kSynchronous:
        case Strategy::kExpected:
            return std::nullopt;
        case Strategy::kCyclic: {
            if (order_.empty()) return std::nullopt;
            const auto e = order_[position_];
            position_ = (position_ + 1) % order_.size();
            return e;
        }
        case Strategy::kRandom: {
            if (cumulative_.empty()) return std::nullopt;
            const double u = rng_.uniform() * cumulative_.back();
            const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
            return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                                     static_cast<std::ptrdiff_t>(cumulative_.size() - 1)));
        }
    }
    return std::nullopt;
}

std::vector<EdgeChoice> edge_sequence(const InteractionGraph& graph, const GossipConfig& config, std::size_t steps) {
    EdgeSelector selector(graph, config);
    std::vector<EdgeChoice> out;
    out.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) {
        out.push_back(selector.next());
    }
    return out;
}

KrausChannel gossip_channel(Edge edge, double alpha, const NetworkShape& shape) {
    require_alpha(alpha);
    if (edge.a == edge.b || edge.a >= shape.sites() || edge.b >= shape.sites()) {
        throw ValidationError("gossip_channel: invalid edge");
    }
    const auto dim = shape.total_dim();
    return KrausChannel(shape, {ComplexMatrix::identity(dim) * Complex{std::sqrt(1.0 - alpha)},
                                permutation_unitary(swap_of(edge, shape), shape) * Complex{std::sqrt(alpha)}});
}

KrausChannel synchronous_channel(const InteractionGraph& graph, double alpha) {
    require_alpha(alpha);
    const auto& shape = graph.shape();
    std::vector<ComplexMatrix> ops{ComplexMatrix::identity(shape.total_dim()) * Complex{std::sqrt(1.0 - alpha)}};
    if (graph.edges().empty()) {
        ops.front() = ComplexMatrix::identity(shape.total_dim());
    }
    for (std::size_t i = 0; i < graph.edges().size(); ++i) {
        ops.push_back(permutation_unitary(swap_of(graph.edges()[i], shape), shape) *
                      Complex{std::sqrt(alpha * graph.weights()[i])});
    }
    return KrausChannel(shape, std::move(ops));
}

KrausChannel cycle_map(const InteractionGraph& graph, const std::vector<std::size_t>& order, double alpha) {
    require_alpha(alpha);
    if (order.empty()) {
        throw ValidationError("cycle_map: empty edge order");
    }
    GossipConfig cfg;
    cfg.alpha = alpha;
    cfg.cycle_order = order;
    cfg.validate(graph);
    if (order.size() > kMaxCycleKrausLength) {
        throw ResourceError("cycle_map: Kraus enumeration of " + std::to_string(order.size()) +
                            " steps exceeds 2^" + std::to_string(kMaxCycleKrausLength) +
                            " terms; use cycle_superoperator instead");
    }
    const auto& shape = graph.shape();
    const auto dim = shape.total_dim();
    const Complex keep{std::sqrt(1.0 - alpha)};
    const Complex swap{std::sqrt(alpha)};

    // Products A_T ... A_1, built one step at a time.
    std::vector<ComplexMatrix> ops{ComplexMatrix::identity(dim)};
    for (auto e : order) {
        const auto u = permutation_unitary(swap_of(graph.edges()[e], shape), shape);
        std::vector<ComplexMatrix> next;
        next.reserve(ops.size() * 2);
        for (const auto& a : ops) {
            next.push_back(a * keep);
            next.push_back(u * a * swap);
        }
        ops = std::move(next);
    }
    return KrausChannel(shape, std::move(ops));
}

ComplexMatrix gossip_step(const ComplexMatrix& rho, Edge edge, double alpha, const NetworkShape& shape) {
    return rho * Complex{1.0 - alpha} + conjugate_by_permutation(rho, swap_of(edge, shape), shape) * Complex{alpha};
}

ComplexMatrix synchronous_step(const ComplexMatrix& rho, const InteractionGraph& graph, double alpha) {
    if (graph.edges().empty()) {
        return rho;
    }
    ComplexMatrix out = rho * Complex{1.0 - alpha};
    for (std::size_t i = 0; i < graph.edges().size(); ++i) {
        out += conjugate_by_permutation(rho, swap_of(graph.edges()[i], graph.shape()), graph.shape()) *
               Complex{alpha * graph.weights()[i]};
    }
    return out;
}

namespace {

ComplexMatrix apply_choice(const ComplexMatrix& rho, const InteractionGraph& graph, double alpha, EdgeChoice c) {
    if (c) {
        return gossip_step(rho, graph.edges().at(*c), alpha, graph.shape());
    }
    return synchronous_step(rho, graph, alpha);
}

}  // namespace

EvolutionResult evolve_sequence(const DensityOperator& rho0, const InteractionGraph& graph, double alpha,
                                Strategy label, const std::vector<EdgeChoice>& choices, const Observable& sigma,
                                const std::optional<ComplexMatrix>& s, bool stop_when_converged) {
    require_alpha(alpha);
    const auto& shape = graph.shape();
    if (!(rho0.shape() == shape)) {
        throw ValidationError("evolve: initial state and graph describe different networks");
    }
    if (sigma.dim() != shape.local_dim()) {
        throw ValidationError("evolve: sigma dimension does not match the local dimension");
    }

    EvolutionResult result;
    if (!graph.connected()) {
        result.warnings.push_back("interaction graph is disconnected; convergence to SSC is not guaranteed");
    }
    result.record.strategy = label;
    result.symmetrized = twirl_operator(rho0.matrix(), shape);

    std::vector<ComplexMatrix> lifts;
    for (std::size_t l = 0; l < shape.sites(); ++l) {
        lifts.push_back(lift_local(sigma.matrix(), l, shape));
    }
    const ComplexMatrix s_op = s ? *s : average_local(sigma.matrix(), shape);
    if (s_op.dim() != shape.total_dim()) {
        throw ValidationError("evolve: S has the wrong dimension");
    }
    const SymProjector pi_sym(sigma, shape);

    auto make_row = [&](std::size_t t, EdgeChoice edge, const ComplexMatrix& rho) {
        TrajectoryRow row;
        row.t = t;
        row.edge = edge;
        row.z.reserve(lifts.size());
        for (const auto& lift : lifts) {
            row.z.push_back(trace_product(lift, rho).real());
        }
        row.s_expectation = trace_product(s_op, rho).real();
        row.ssc_gap = frobenius_distance(rho, result.symmetrized);
        row.smc_defect = 1.0 - pi_sym.weight(rho);
        return row;
    };

    ComplexMatrix rho = rho0.matrix();
    result.record.rows.push_back(make_row(0, std::nullopt, rho));
    bool stopped_early = false;
    for (std::size_t t = 0; t < choices.size(); ++t) {
        if (stop_when_converged && result.record.rows.back().ssc_gap < GossipConfig::kConvergedGap) {
            stopped_early = true;
            break;
        }
        rho = apply_choice(rho, graph, alpha, choices[t]);
        result.record.rows.push_back(make_row(t + 1, choices[t], rho));
    }
    result.converged = result.record.rows.back().ssc_gap < GossipConfig::kConvergedGap;
    result.termination = (stopped_early || (stop_when_converged && result.converged)) ? "converged" : "steps_exhausted";
    result.final_state = std::move(rho);
    return result;
}

EvolutionResult evolve(const DensityOperator& rho0, const InteractionGraph& graph, const GossipConfig& config,
                       const Observable& sigma, const std::optional<ComplexMatrix>& s) {
    config.validate(graph);
    return evolve_sequence(rho0, graph, config.alpha, config.strategy, edge_sequence(graph, config, config.steps),
                           sigma, s, config.stop_when_converged);
}

DualFixedPointReport dual_fixed_point_check(const InteractionGraph& graph, double alpha, const ComplexMatrix& s) {
    require_alpha(alpha);
    const auto& shape = graph.shape();
    if (max_swap_deviation(s, shape) > 1e-10 * std::max(1.0, frobenius_norm(s))) {
        throw ValidationError("dual_fixed_point_check: S is not permutation invariant");
    }
    DualFixedPointReport r;
    for (const auto& e : graph.edges()) {
        const auto ch = gossip_channel(e, alpha, shape);
        r.max_edge_drift = std::max(r.max_edge_drift, frobenius_distance(dual_apply(ch, s), s));
    }
    r.invariant = r.max_edge_drift < 1e-12;
    return r;
}

ComplexMatrix iterate_dual(const InteractionGraph& graph, double alpha, const std::vector<EdgeChoice>& choices,
                           const ComplexMatrix& x) {
    require_alpha(alpha);
    // Every Kraus operator of a gossip channel is self-adjoint, so the dual
    // step coincides with the forward step.
    ComplexMatrix out = x;
    for (auto it = choices.rbegin(); it != choices.rend(); ++it) {
        out = apply_choice(out, graph, alpha, *it);
    }
    return out;
}

SAverageReport s_average_check(const ComplexMatrix& s, const InteractionGraph& graph, double alpha,
                               const std::vector<DensityOperator>& samples, std::size_t max_steps) {
    require_alpha(alpha);
    const auto& shape = graph.shape();
    if (s.dim() != shape.total_dim()) {
        throw ValidationError("s_average_check: S has the wrong dimension");
    }
    if (s.hermiticity_defect() > kHermitianTol) {
        throw ValidationError("s_average_check: S is not Hermitian");
    }
    const double s_norm = std::max(1.0, frobenius_norm(s));
    if (max_swap_deviation(s, shape) > 1e-10 * s_norm) {
        throw ValidationError("s_average_check: S is not permutation invariant");
    }

    // Least squares for S ~ (1/m) sum_l sigma^(l) over a Hermitian local basis.
    const auto basis = local_hermitian_basis(shape.local_dim());
    Eigen::MatrixXcd columns(static_cast<Eigen::Index>(shape.total_dim() * shape.total_dim()),
                             static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        columns.col(static_cast<Eigen::Index>(k)) = vectorize(average_local(basis[k], shape));
    }
    const Eigen::VectorXcd coeffs = columns.colPivHouseholderQr().solve(vectorize(s));

    SAverageReport report;
    report.sigma = ComplexMatrix(shape.local_dim());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        report.sigma += basis[k] * Complex{coeffs(static_cast<Eigen::Index>(k)).real()};
    }
    report.residual = frobenius_distance(s, average_local(report.sigma, shape));
    report.decomposable = report.residual <= 1e-9 * s_norm;

    const Observable local(report.sigma);
    GossipConfig cfg;
    cfg.alpha = alpha;
    cfg.strategy = Strategy::kCyclic;
    cfg.steps = max_steps;
    cfg.stop_when_converged = true;

    report.conserved = true;
    bool all_match = true;
    for (const auto& rho0 : samples) {
        const auto run = evolve(rho0, graph, cfg, local, s);
        SAverageSample sample;
        sample.initial_expectation = run.record.rows.front().s_expectation;
        for (const auto& row : run.record.rows) {
            sample.max_conservation_drift =
                std::max(sample.max_conservation_drift, std::abs(row.s_expectation - sample.initial_expectation));
        }
        sample.local_limits = run.record.rows.back().z;
        for (double z : sample.local_limits) {
            sample.limit_mismatch = std::max(sample.limit_mismatch, std::abs(z - sample.initial_expectation));
        }
        sample.converged = run.converged;
        report.conserved = report.conserved && sample.max_conservation_drift < 1e-10;
        all_match = all_match && sample.converged && sample.limit_mismatch < 1e-8;
        report.samples.push_back(std::move(sample));
    }
    report.average_consensus = report.decomposable && all_match;
    return report;
}

ProbabilityOneReport probability_one_convergence_experiment(const InteractionGraph& graph, double alpha,
                                                            const DensityOperator& rho0, double eps,
                                                            std::size_t trials, std::size_t horizon,
                                                            std::uint64_t seed) {
    require_alpha(alpha);
    const auto& shape = graph.shape();
    if (!(rho0.shape() == shape)) {
        throw ValidationError("probability experiment: state and graph describe different networks");
    }
    if (!graph.connected()) {
        throw ValidationError("probability experiment: the interaction graph must be connected");
    }
    const auto target = twirl_operator(rho0.matrix(), shape);

    ProbabilityOneReport report;
    report.trials = trials;
    report.max_distance_increase = -std::numeric_limits<double>::infinity();
    for (std::size_t trial = 0; trial < trials; ++trial) {
        GossipConfig cfg;
        cfg.alpha = alpha;
        cfg.strategy = Strategy::kRandom;
        cfg.seed = derive_stream_seed(seed, trial);
        EdgeSelector selector(graph, cfg);

        ComplexMatrix rho = rho0.matrix();
        double distance = frobenius_distance(rho, target);
        for (std::size_t t = 0; t < horizon; ++t) {
            rho = apply_choice(rho, graph, alpha, selector.next());
            const double next = frobenius_distance(rho, target);
            const double increase = next - distance;
            report.max_distance_increase = std::max(report.max_distance_increase, increase);
            if (increase > 1e-12) {
                throw CertificateError("trial " + std::to_string(trial) + ", step " + std::to_string(t + 1) +
                                       ": distance to the symmetrized state increased by " + std::to_string(increase));
            }
            distance = next;
        }
        const double squared = distance * distance;
        report.final_squared_distances.push_back(squared);
        if (squared <= eps) {
            ++report.successes;
        }
    }
    if (horizon == 0 || trials == 0) {
        report.max_distance_increase = 0.0;
    }
    report.probability = trials == 0 ? 0.0 : static_cast<double>(report.successes) / static_cast<double>(trials);
    return report;
}

}  // namespace qcons
