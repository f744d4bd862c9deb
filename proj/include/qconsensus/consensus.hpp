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

// Classifiers for the four notions of quantum consensus:
//
//   sigma-expectation consensus (EC)    Tr[sigma^(k) rho] equal for all k
//   reduced state consensus (RSC)       all single-site marginals equal
//   symmetric state consensus (SSC)     rho invariant under all U_pi
//   single sigma-measurement (SMC)      Tr[Pi_sym rho] = 1
//
// Every check reports a scalar gap that vanishes exactly on the consensus
// set, and a flag `holds = gap < tolerance`.

#pragma once

#include <optional>
#include <vector>

#include "qconsensus/quantum_state.hpp"

namespace qcons {

inline constexpr double kDefaultConsensusTol = 1e-8;

struct ConsensusCheck {
    bool holds = false;
    double gap = 0.0;
};

struct ConsensusReport {
    double tolerance = kDefaultConsensusTol;
    ConsensusCheck sigma_ec;  // max_{k,l} |Tr sigma^(k) rho - Tr sigma^(l) rho|
    ConsensusCheck rsc;       // max pairwise Frobenius distance of marginals
    ConsensusCheck ssc;       // ||rho - twirl(rho)||_F
    ConsensusCheck smc;       // 1 - Tr[Pi_sym rho]
    /// max_{j,k,l} |Tr(Pi_j^(k) Pi_j^(l) rho) - Tr(Pi_j^(l) rho)|; never
    /// exceeds the SMC defect.
    double smc_pairwise_gap = 0.0;
    bool sigma_nondegenerate = false;
};

ConsensusCheck check_sigma_ec(const DensityOperator& rho, const ComplexMatrix& sigma,
                              double tol = kDefaultConsensusTol);
ConsensusCheck check_rsc(const DensityOperator& rho, double tol = kDefaultConsensusTol);
ConsensusCheck check_ssc(const DensityOperator& rho, double tol = kDefaultConsensusTol);
/// Alternative SSC detector: max deviation under adjacent transpositions.
double ssc_swap_gap(const DensityOperator& rho);

/// Pi_sym = sum_j Pi_j^{(x) m} for the spectral projectors of sigma.
class SymProjector {
   public:
    SymProjector(const Observable& sigma, const NetworkShape& shape);

    const ComplexMatrix& matrix() const { return pi_sym_; }
    /// Tr[Pi_sym rho].
    double weight(const ComplexMatrix& rho) const;

   private:
    ComplexMatrix pi_sym_;
};

ConsensusCheck check_smc(const DensityOperator& rho, const Observable& sigma, double tol = kDefaultConsensusTol);
/// Raw pairwise form of the SMC condition, evaluated on every (j, k, l).
double smc_pairwise_gap(const DensityOperator& rho, const Observable& sigma);

/// Runs all four checks. Throws CertificateError if the flags contradict
/// the implications SSC => RSC => EC, SMC => EC, and (for nondegenerate
/// sigma) SMC => SSC.
ConsensusReport classify(const DensityOperator& rho, const Observable& sigma, double tol = kDefaultConsensusTol);

/// Orthogonal Hermitian basis of n x n matrices: diagonal units E_jj and,
/// for j < k, E_jk + E_kj and i(E_jk - E_kj).
std::vector<ComplexMatrix> local_hermitian_basis(std::size_t n);

struct RscEquivalence {
    bool rsc = false;
    bool ec_for_whole_basis = false;
    bool agrees() const { return rsc == ec_for_whole_basis; }
};

/// Compares check_rsc with sigma-EC over every element of a local Hermitian
/// operator basis.
RscEquivalence rsc_iff_all_sigma_ec(const DensityOperator& rho, double tol = kDefaultConsensusTol);

/// |psi_0> (x) ... (x) |psi_{m-1}> as a density operator; kets need not be
/// normalized but must share a dimension >= 2.
DensityOperator pure_product_state(const std::vector<ComplexVector>& kets);

struct PureRscCheck {
    bool rsc = false;
    bool ssc = false;
    /// RSC with pure marginals implies SSC; vacuously true when not RSC.
    bool holds() const { return !rsc || ssc; }
};

PureRscCheck pure_rsc_implies_ssc_check(const std::vector<ComplexVector>& kets, double tol = kDefaultConsensusTol);

struct NogoReport {
    std::size_t n = 0;
    /// Largest eigenvalue of Pi_sym Pi'_sym Pi_sym for the computational
    /// basis observable and its Fourier conjugate on two sites.
    double lambda_max = 0.0;
    /// lambda_max >= 1 - 1e-10: some state is SMC for both observables.
    bool feasible = false;
    /// n == 2 only: dimension of the joint range of the x, y, z Pi_sym.
    std::optional<std::size_t> pauli_joint_dim;
    std::optional<bool> pauli_feasible;
};

/// Numerical form of the no-go argument: no state is SMC for every sigma.
/// Requires 2 <= n <= 8.
NogoReport nogo_check(std::size_t n);

/// Builds a state whose single-site marginals all equal rho_bar but which
/// is not permutation invariant:
///
///   rho = p2 R2^{(x)m} + p1 |Phi><Phi| (x) R1^{(x)(m-2)}
///
/// where v1, v2 are the two leading eigenvectors of rho_bar with second
/// eigenvalue lambda2, R1 = (|v1><v1| + |v2><v2|)/2, p1 = 2 lambda2,
/// R2 = (rho_bar - p1 R1) / p2, p2 = 1 - p1 and
/// |Phi> = (|e1 f1> + |e2 f2>)/sqrt(2) with e = (v1, v2) and f the same pair
/// rotated by pi/4 (so <e1|f1> = 1/sqrt(2)). Throws ValidationError if
/// rho_bar has rank < 2 or m < 2.
DensityOperator rsc_not_ssc_witness(const ComplexMatrix& rho_bar, std::size_t m);

}  // namespace qcons
