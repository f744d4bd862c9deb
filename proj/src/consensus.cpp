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

#include "qconsensus/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qconsensus/errors.hpp"

namespace qcons {

namespace {

std::vector<ComplexMatrix> marginals(const DensityOperator& rho) {
    std::vector<ComplexMatrix> out;
    out.reserve(rho.shape().sites());
    for (std::size_t k = 0; k < rho.shape().sites(); ++k) {
        out.push_back(reduced_state(rho.matrix(), rho.shape(), k));
    }
    return out;
}

ComplexMatrix projector_onto(const ComplexVector& v) { return ComplexMatrix::outer(v, v); }

ComplexVector kron_vec(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

}  // namespace

ConsensusCheck check_sigma_ec(const DensityOperator& rho, const ComplexMatrix& sigma, double tol) {
    if (sigma.dim() != rho.shape().local_dim()) {
        throw ValidationError("sigma-EC: local observable has dimension " + std::to_string(sigma.dim()) +
                              ", expected " + std::to_string(rho.shape().local_dim()));
    }
    std::vector<Complex> expectations;
    for (const auto& marginal : marginals(rho)) {
        expectations.push_back(trace_product(sigma, marginal));
    }
    double gap = 0.0;
    for (std::size_t k = 0; k < expectations.size(); ++k) {
        for (std::size_t l = k + 1; l < expectations.size(); ++l) {
            gap = std::max(gap, std::abs(expectations[k] - expectations[l]));
        }
    }
    return {gap < tol, gap};
}

ConsensusCheck check_rsc(const DensityOperator& rho, double tol) {
    const auto reduced = marginals(rho);
    double gap = 0.0;
    for (std::size_t k = 0; k < reduced.size(); ++k) {
        for (std::size_t l = k + 1; l < reduced.size(); ++l) {
            gap = std::max(gap, frobenius_distance(reduced[k], reduced[l]));
        }
    }
    return {gap < tol, gap};
}

ConsensusCheck check_ssc(const DensityOperator& rho, double tol) {
    const double gap = frobenius_distance(rho.matrix(), twirl_operator(rho.matrix(), rho.shape()));
    return {gap < tol, gap};
}

double ssc_swap_gap(const DensityOperator& rho) { return max_swap_deviation(rho.matrix(), rho.shape()); }

SymProjector::SymProjector(const Observable& sigma, const NetworkShape& shape) : pi_sym_(shape.total_dim()) {
    if (sigma.dim() != shape.local_dim()) {
        throw ValidationError("SymProjector: observable dimension does not match local dimension");
    }
    for (const auto& component : sigma.spectrum()) {
        pi_sym_ += kron_power(component.projector, shape.sites());
    }
}

double SymProjector::weight(const ComplexMatrix& rho) const { return trace_product(pi_sym_, rho).real(); }

ConsensusCheck check_smc(const DensityOperator& rho, const Observable& sigma, double tol) {
    const SymProjector pi(sigma, rho.shape());
    const double defect = std::clamp(1.0 - pi.weight(rho.matrix()), 0.0, 1.0);
    return {defect < tol, defect};
}

double smc_pairwise_gap(const DensityOperator& rho, const Observable& sigma) {
    const auto& shape = rho.shape();
    const auto reduced = marginals(rho);
    double gap = 0.0;
    for (std::size_t k = 0; k < shape.sites(); ++k) {
        for (std::size_t l = k + 1; l < shape.sites(); ++l) {
            const std::size_t keep[] = {k, l};
            const auto pair = partial_trace(rho.matrix(), shape, keep);
            for (const auto& component : sigma.spectrum()) {
                const double joint = trace_product(kron(component.projector, component.projector), pair).real();
                const double on_k = trace_product(component.projector, reduced[k]).real();
                const double on_l = trace_product(component.projector, reduced[l]).real();
                gap = std::max({gap, std::abs(joint - on_k), std::abs(joint - on_l)});
            }
        }
    }
    return gap;
}

ConsensusReport classify(const DensityOperator& rho, const Observable& sigma, double tol) {
    ConsensusReport r;
    r.tolerance = tol;
    r.sigma_ec = check_sigma_ec(rho, sigma.matrix(), tol);
    r.rsc = check_rsc(rho, tol);
    r.ssc = check_ssc(rho, tol);
    r.smc = check_smc(rho, sigma, tol);
    r.smc_pairwise_gap = smc_pairwise_gap(rho, sigma);
    r.sigma_nondegenerate = sigma.nondegenerate();

    auto violated = [](const char* what) {
        throw CertificateError(std::string("consensus hierarchy violated: ") + what);
    };
    if (r.ssc.holds && !r.rsc.holds) violated("SSC holds but RSC does not");
    if (r.rsc.holds && !r.sigma_ec.holds) violated("RSC holds but sigma-EC does not");
    if (r.smc.holds && !r.sigma_ec.holds) violated("SMC holds but sigma-EC does not");
    if (r.smc.holds && r.sigma_nondegenerate && !r.ssc.holds) violated("SMC (nondegenerate sigma) holds but SSC does not");
    if (r.smc_pairwise_gap > r.smc.gap + tol) violated("pairwise SMC gap exceeds the Pi_sym defect");
    return r;
}

std::vector<ComplexMatrix> local_hermitian_basis(std::size_t n) {
    std::vector<ComplexMatrix> basis;
    for (std::size_t j = 0; j < n; ++j) {
        ComplexMatrix e(n);
        e(j, j) = 1.0;
        basis.push_back(std::move(e));
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            ComplexMatrix sym(n);
            sym(j, k) = 1.0;
            sym(k, j) = 1.0;
            basis.push_back(std::move(sym));
            ComplexMatrix anti(n);
            anti(j, k) = Complex{0.0, 1.0};
            anti(k, j) = Complex{0.0, -1.0};
            basis.push_back(std::move(anti));
        }
    }
    return basis;
}

RscEquivalence rsc_iff_all_sigma_ec(const DensityOperator& rho, double tol) {
    RscEquivalence r;
    r.rsc = check_rsc(rho, tol).holds;
    r.ec_for_whole_basis = true;
    for (const auto& b : local_hermitian_basis(rho.shape().local_dim())) {
        if (!check_sigma_ec(rho, b, tol).holds) {
            r.ec_for_whole_basis = false;
            break;
        }
    }
    return r;
}

DensityOperator pure_product_state(const std::vector<ComplexVector>& kets) {
    if (kets.empty()) {
        throw ValidationError("pure_product_state: no kets given");
    }
    const auto n = static_cast<std::size_t>(kets.front().size());
    std::vector<ComplexMatrix> factors;
    for (const auto& k : kets) {
        if (static_cast<std::size_t>(k.size()) != n) {
            throw ValidationError("pure_product_state: kets have different dimensions");
        }
        const double norm = k.norm();
        if (norm == 0.0) {
            throw ValidationError("pure_product_state: zero ket");
        }
        factors.push_back(projector_onto(k / norm));
    }
    return DensityOperator(NetworkShape(kets.size(), n), kron_all(factors));
}

PureRscCheck pure_rsc_implies_ssc_check(const std::vector<ComplexVector>& kets, double tol) {
    const auto rho = pure_product_state(kets);
    return {check_rsc(rho, tol).holds, check_ssc(rho, tol).holds};
}

NogoReport nogo_check(std::size_t n) {
    if (n < 2 || n > 8) {
        throw ValidationError("nogo: local dimension must be in 2..8, got " + std::to_string(n));
    }
    const NetworkShape shape(2, n);
    const double two_pi = 2.0 * std::numbers::pi;

    // sigma = sum_k k |x_k><x_k| and its Fourier conjugate sum_k k |p_k><p_k|.
    std::vector<Complex> levels(n);
    for (std::size_t k = 0; k < n; ++k) levels[k] = static_cast<double>(k);
    const Observable sigma(ComplexMatrix::diagonal(levels));

    ComplexMatrix fourier(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            fourier(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), two_pi * static_cast<double>(j * k) /
                                                                                   static_cast<double>(n));
        }
    }
    const Observable sigma_prime(fourier * ComplexMatrix::diagonal(levels) * fourier.adjoint());

    const SymProjector pi(sigma, shape);
    const SymProjector pi_prime(sigma_prime, shape);
    const auto h = pi.matrix() * pi_prime.matrix() * pi.matrix();

    NogoReport r;
    r.n = n;
    r.lambda_max = eigh(h).values.back();
    r.feasible = r.lambda_max >= 1.0 - 1e-10;

    if (n == 2) {
        // Joint range of the three Pi_sym is the null space of
        // sum_a (I - Pi_sym^a), a positive semidefinite operator.
        ComplexMatrix deficit(shape.total_dim());
        const auto id = ComplexMatrix::identity(shape.total_dim());
        for (const auto& p : {pauli_x(), pauli_y(), pauli_z()}) {
            deficit += id - SymProjector(Observable(p), shape).matrix();
        }
        std::size_t dim = 0;
        for (double v : eigh(deficit).values) {
            if (v < 1e-10) ++dim;
        }
        r.pauli_joint_dim = dim;
        r.pauli_feasible = dim > 0;
    }
    return r;
}

DensityOperator rsc_not_ssc_witness(const ComplexMatrix& rho_bar, std::size_t m) {
    if (m < 2) {
        throw ValidationError("witness: at least two sites are required");
    }
    const auto n = rho_bar.dim();
    const NetworkShape local(1, n);
    const DensityOperator validated(local, rho_bar);  // throws if not a state
    const auto eig = eigh(validated.matrix());
    std::size_t rank = 0;
    for (double v : eig.values) {
        if (v > 1e-10) ++rank;
    }
    if (rank < 2) {
        throw ValidationError("witness: marginal has rank " + std::to_string(rank) +
                              "; rank-1 marginals with RSC are always SSC");
    }

    const auto col = [&](std::size_t i) -> ComplexVector {
        return eig.vectors.eigen().col(static_cast<Eigen::Index>(i));
    };
    const ComplexVector v1 = col(n - 1);
    const ComplexVector v2 = col(n - 2);
    const double lambda2 = eig.values[n - 2];

    const double p1 = 2.0 * lambda2;
    const double p2 = 1.0 - p1;
    const ComplexMatrix r1 = (projector_onto(v1) + projector_onto(v2)) * Complex{0.5};

    const double s = 1.0 / std::sqrt(2.0);
    const ComplexVector f1 = s * (v1 + v2);
    const ComplexVector f2 = s * (v2 - v1);
    const ComplexVector phi = s * (kron_vec(v1, f1) + kron_vec(v2, f2));

    const NetworkShape shape(m, n);
    ComplexMatrix rho = kron(projector_onto(phi), kron_power(r1, m - 2)) * Complex{p1};
    if (p2 > 1e-12) {
        const ComplexMatrix r2 = (rho_bar - r1 * Complex{p1}) * Complex{1.0 / p2};
        rho += kron_power(r2, m) * Complex{p2};
    }
    return DensityOperator(shape, std::move(rho));
}

}  // namespace qcons
