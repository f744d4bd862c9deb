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

#include "qconsensus/superoperator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qconsensus/errors.hpp"

namespace qcons {

namespace {

constexpr double kUnitEigenTol = 1e-8;
constexpr double kDiskSlack = 1e-9;
constexpr double kNullTol = 1e-8;

void require_cap(const NetworkShape& shape) {
    if (shape.total_dim() > kMaxSuperoperatorTotalDim) {
        throw ResourceError("superoperator: total dimension " + std::to_string(shape.total_dim()) +
                            " exceeds the cap of " + std::to_string(kMaxSuperoperatorTotalDim));
    }
}

Eigen::MatrixXcd to_dense(const ComplexMatrix& x) { return x.eigen(); }

// Columns span the null space of a Hermitian positive semidefinite or a
// general square matrix.
Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& a, bool hermitian) {
    std::vector<Eigen::VectorXcd> cols;
    if (hermitian) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((a + a.adjoint()) * 0.5);
        const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (std::abs(es.eigenvalues()(i)) < kNullTol * scale) {
                cols.push_back(es.eigenvectors().col(i));
            }
        }
    } else {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        const double scale = std::max(1.0, s.size() > 0 ? s(0) : 0.0);
        for (Eigen::Index i = 0; i < a.cols(); ++i) {
            if (i >= s.size() || s(i) < kNullTol * scale) {
                cols.push_back(svd.matrixV().col(i));
            }
        }
    }
    Eigen::MatrixXcd out(a.cols(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
        out.col(static_cast<Eigen::Index>(k)) = cols[k];
    }
    return out;
}

}  // namespace

ComplexMatrix Superoperator::apply(const ComplexMatrix& x) const {
    if (x.dim() != shape.total_dim()) {
        throw ValidationError("superoperator: operand has the wrong dimension");
    }
    return unvectorize(matrix * vectorize(x));
}

bool Superoperator::is_hermitian(double tol) const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Superoperator build_superoperator(const KrausChannel& ch, std::string description) {
    require_cap(ch.shape());
    const auto d = static_cast<Eigen::Index>(ch.shape().total_dim());
    Superoperator sop{ch.shape(), Eigen::MatrixXcd::Zero(d * d, d * d), std::move(description)};
    for (const auto& a : ch.kraus_ops()) {
        sop.matrix += to_dense(kron(a.conjugate(), a));
    }
    return sop;
}

Superoperator compose(const Superoperator& second, const Superoperator& first) {
    if (!(second.shape == first.shape)) {
        throw ValidationError("compose: superoperators act on different networks");
    }
    return {first.shape, second.matrix * first.matrix, second.description + " o " + first.description};
}

Superoperator cycle_superoperator(const InteractionGraph& graph, const std::vector<std::size_t>& order,
                                  double alpha) {
    require_cap(graph.shape());
    if (order.empty()) {
        throw ValidationError("cycle_superoperator: empty edge order");
    }
    GossipConfig cfg;
    cfg.alpha = alpha;
    cfg.cycle_order = order;
    cfg.validate(graph);

    std::vector<Eigen::MatrixXcd> per_edge;
    for (const auto& e : graph.edges()) {
        per_edge.push_back(build_superoperator(gossip_channel(e, alpha, graph.shape())).matrix);
    }
    const auto d = static_cast<Eigen::Index>(graph.shape().total_dim());
    Superoperator out{graph.shape(), Eigen::MatrixXcd::Identity(d * d, d * d), "cycle"};
    for (auto e : order) {
        out.matrix = per_edge[e] * out.matrix;
    }
    return out;
}

SpectralCertificate spectral_certificate(const Superoperator& sop, double identity_weight) {
    if (!(identity_weight >= 0.0 && identity_weight <= 1.0)) {
        throw ValidationError("spectral_certificate: identity weight must lie in [0, 1]");
    }
    SpectralCertificate cert;
    cert.identity_weight = identity_weight;
    if (sop.is_hermitian()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((sop.matrix + sop.matrix.adjoint()) * 0.5,
                                                           Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            cert.eigenvalues.emplace_back(es.eigenvalues()(i), 0.0);
        }
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(sop.matrix, false);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            cert.eigenvalues.push_back(es.eigenvalues()(i));
        }
    }
    std::stable_sort(cert.eigenvalues.begin(), cert.eigenvalues.end(), [](const auto& a, const auto& b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
        return std::arg(a) < std::arg(b);
    });

    const double radius = 1.0 - identity_weight;
    cert.max_disk_excess = -radius;
    cert.all_real = true;
    cert.in_unit_interval = true;
    double largest_other = 0.0;
    for (const auto& lambda : cert.eigenvalues) {
        cert.max_disk_excess = std::max(cert.max_disk_excess, std::abs(lambda - identity_weight) - radius);
        if (std::abs(lambda.imag()) > kDiskSlack) {
            cert.all_real = false;
            cert.in_unit_interval = false;
        } else if (lambda.real() < -kDiskSlack || lambda.real() > 1.0 + kDiskSlack) {
            cert.in_unit_interval = false;
        }
        if (std::abs(lambda - 1.0) < kUnitEigenTol) {
            ++cert.unit_eigen_count;
            continue;
        }
        largest_other = std::max(largest_other, std::abs(lambda));
        if (std::abs(lambda) >= 1.0 - kDiskSlack) {
            ++cert.peripheral_count;
        }
    }
    cert.disk_ok = cert.max_disk_excess <= kDiskSlack;
    cert.spectral_gap = 1.0 - largest_other;
    cert.pass = identity_weight > 0.0 && cert.disk_ok && cert.peripheral_count == 0 && cert.unit_eigen_count > 0;
    return cert;
}

std::size_t commutant_dimension(const KrausChannel& ch) {
    require_cap(ch.shape());
    const auto d = static_cast<Eigen::Index>(ch.shape().total_dim());
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(d * d, d * d);
    auto add = [&](const Eigen::MatrixXcd& a) {
        // vec(A X - X A) = (kron(I, A) - kron(A^T, I)) vec(X)
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d * d, d * d);
        for (Eigen::Index j = 0; j < d; ++j) {
            m.block(j * d, j * d, d, d) += a;
            for (Eigen::Index i = 0; i < d; ++i) {
                m.block(j * d, i * d, d, d) -= a(i, j) * id;
            }
        }
        gram += m.adjoint() * m;
    };
    for (const auto& op : ch.kraus_ops()) {
        const Eigen::MatrixXcd a = op.eigen();
        add(a);
        if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 0.0) {
            add(a.adjoint());
        }
    }
    return static_cast<std::size_t>(null_space(gram, true).cols());
}

FixedPointSpace fixed_point_space(const InteractionGraph& graph, double alpha) {
    require_cap(graph.shape());
    const auto ch = synchronous_channel(graph, alpha);
    const auto sop = build_superoperator(ch, "synchronous");
    const auto dd = sop.matrix.rows();
    const Eigen::MatrixXcd shifted = sop.matrix - Eigen::MatrixXcd::Identity(dd, dd);
    const Eigen::MatrixXcd null = null_space(shifted, sop.is_hermitian());

    FixedPointSpace out;
    out.dimension = static_cast<std::size_t>(null.cols());
    out.commutant_dimension = commutant_dimension(ch);
    if (out.dimension != out.commutant_dimension) {
        throw CertificateError("fixed_point_space: null space of (S - I) has dimension " +
                               std::to_string(out.dimension) + " but the commutant has dimension " +
                               std::to_string(out.commutant_dimension));
    }

    // The fixed space is closed under adjoints, so the Hermitian and
    // anti-Hermitian parts of the null vectors span it.
    std::vector<Eigen::VectorXcd> accepted;
    auto try_add = [&](const ComplexMatrix& h) {
        Eigen::VectorXcd v = vectorize(h);
        for (const auto& b : accepted) {
            v -= b.dot(v) * b;
        }
        const double norm = v.norm();
        if (norm > 1e-6) {
            v /= norm;
            // Gram-Schmidt against Hermitian vectors with real coefficients
            // keeps v Hermitian; clean residual rounding anyway.
            ComplexMatrix x = unvectorize(v);
            x = (x + x.adjoint()) * Complex{0.5};
            Eigen::VectorXcd cleaned = vectorize(x);
            cleaned /= cleaned.norm();
            accepted.push_back(cleaned);
            out.hermitian_basis.push_back(unvectorize(cleaned));
        }
    };
    for (Eigen::Index k = 0; k < null.cols() && accepted.size() < out.dimension; ++k) {
        const ComplexMatrix x = unvectorize(null.col(k));
        try_add((x + x.adjoint()) * Complex{0.5});
        if (accepted.size() < out.dimension) {
            try_add((x - x.adjoint()) * Complex{0.0, -0.5});
        }
    }
    if (out.hermitian_basis.size() != out.dimension) {
        throw CertificateError("fixed_point_space: Hermitian basis has " +
                               std::to_string(out.hermitian_basis.size()) + " elements, expected " +
                               std::to_string(out.dimension));
    }
    return out;
}

}  // namespace qcons
