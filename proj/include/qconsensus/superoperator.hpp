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

// Matrix form of linear maps on operators, acting on column-stacked
// vectors, with the spectral and fixed-point certificates for gossip maps.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qconsensus/gossip.hpp"

namespace qcons {

/// Superoperator work is limited to total_dim <= 64 (4096 x 4096 matrices).
inline constexpr std::size_t kMaxSuperoperatorTotalDim = 64;

struct Superoperator {
    NetworkShape shape;
    Eigen::MatrixXcd matrix;
    std::string description;

    ComplexMatrix apply(const ComplexMatrix& x) const;
    bool is_hermitian(double tol = 1e-12) const;
};

/// sum_k kron(conj(A_k), A_k). Throws ResourceError above the cap.
Superoperator build_superoperator(const KrausChannel& ch, std::string description = "channel");

/// Matrix of `second` o `first`.
Superoperator compose(const Superoperator& second, const Superoperator& first);

/// E_{order[T-1]} o ... o E_{order[0]} built by multiplying edge
/// superoperators; no limit on T.
Superoperator cycle_superoperator(const InteractionGraph& graph, const std::vector<std::size_t>& order, double alpha);

struct SpectralCertificate {
    double identity_weight = 0.0;
    /// Sorted by descending modulus.
    std::vector<std::complex<double>> eigenvalues;
    /// |lambda - q0| <= 1 - q0 + 1e-9 for every eigenvalue.
    bool disk_ok = false;
    /// Largest |lambda - q0| - (1 - q0) over the spectrum.
    double max_disk_excess = 0.0;
    bool all_real = false;  // |Im lambda| <= 1e-9
    bool in_unit_interval = false;  // all real and in [-1e-9, 1 + 1e-9]
    /// Eigenvalues within 1e-8 of 1.
    std::size_t unit_eigen_count = 0;
    /// Eigenvalues of modulus >= 1 - 1e-9 that are not 1.
    std::size_t peripheral_count = 0;
    /// 1 - max{|lambda| : lambda not within 1e-8 of 1}.
    double spectral_gap = 0.0;
    bool pass = false;
};

/// Checks the spectrum of a map (1 - q0) N + q0 id against the disk centred
/// at q0 of radius 1 - q0. Passes only if q0 > 0, the disk holds and 1 is
/// the only eigenvalue on the unit circle. Uses a Hermitian eigensolver
/// when the matrix is Hermitian.
SpectralCertificate spectral_certificate(const Superoperator& sop, double identity_weight);

/// Dimension of {X : [X, A_k] = 0 and [X, A_k^dag] = 0 for all k}.
std::size_t commutant_dimension(const KrausChannel& ch);

struct FixedPointSpace {
    std::size_t dimension = 0;
    std::size_t commutant_dimension = 0;
    /// Orthonormal (Frobenius) Hermitian basis of the fixed operators.
    std::vector<ComplexMatrix> hermitian_basis;
};

/// Fixed points of the synchronous gossip map, computed as the null space
/// of (S - I) and cross-checked against the commutant of its Kraus
/// operators. Throws CertificateError if the two dimensions disagree and
/// ResourceError above the cap.
FixedPointSpace fixed_point_space(const InteractionGraph& graph, double alpha);

}  // namespace qcons
