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

#include "qconsensus/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qconsensus/errors.hpp"

namespace qcons {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.dim() != b.dim()) {
        throw ValidationError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                              std::to_string(b.dim()) + ")");
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : m_(Storage::Zero(idx(dim), idx(dim))) {
    if (dim > kMaxOperatorDim) {
        throw ResourceError("operator dimension " + std::to_string(dim) + " exceeds cap " +
                            std::to_string(kMaxOperatorDim));
    }
}

ComplexMatrix::ComplexMatrix(Storage m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
        throw ValidationError("ComplexMatrix must be square");
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    const auto dim = rows.size();
    m_ = Storage::Zero(idx(dim), idx(dim));
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != dim) {
            throw ValidationError("ComplexMatrix rows must form a square matrix");
        }
        std::size_t j = 0;
        for (const auto& v : row) {
            m_(idx(i), idx(j++)) = v;
        }
        ++i;
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix r(dim);
    r.m_.setIdentity();
    return r;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
    ComplexMatrix r(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        r(i, i) = diag[i];
    }
    return r;
}

ComplexMatrix ComplexMatrix::outer(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size()) {
        throw ValidationError("outer: vector length mismatch");
    }
    return ComplexMatrix(Storage(a * b.adjoint()));
}

ComplexMatrix ComplexMatrix::from_row_major(std::size_t dim, std::span<const Complex> entries) {
    if (entries.size() != dim * dim) {
        throw ValidationError("from_row_major: expected " + std::to_string(dim * dim) + " entries, got " +
                              std::to_string(entries.size()));
    }
    ComplexMatrix r(dim);
    std::copy(entries.begin(), entries.end(), r.m_.data());
    return r;
}

ComplexMatrix ComplexMatrix::adjoint() const { return ComplexMatrix(Storage(m_.adjoint())); }
ComplexMatrix ComplexMatrix::conjugate() const { return ComplexMatrix(Storage(m_.conjugate())); }
ComplexMatrix ComplexMatrix::transpose() const { return ComplexMatrix(Storage(m_.transpose())); }

double ComplexMatrix::hermiticity_defect() const {
    if (m_.size() == 0) {
        return 0.0;
    }
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
    require_same_dim(*this, other, "max_abs_diff");
    if (m_.size() == 0) {
        return 0.0;
    }
    return (m_ - other.m_).cwiseAbs().maxCoeff();
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    require_same_dim(*this, o, "operator+");
    m_ += o.m_;
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    require_same_dim(*this, o, "operator-");
    m_ -= o.m_;
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    m_ *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "operator*");
    return ComplexMatrix(ComplexMatrix::Storage(a.m_ * b.m_));
}

ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v) {
    if (static_cast<std::size_t>(v.size()) != a.dim()) {
        throw ValidationError("matrix-vector product: dimension mismatch");
    }
    return a.m_ * v;
}

NetworkShape::NetworkShape(std::size_t m, std::size_t n) : m_(m), n_(n), total_(1) {
    if (m < 1) {
        throw ValidationError("network must have at least one site");
    }
    if (n < 2) {
        throw ValidationError("local dimension must be at least 2");
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (total_ > kMaxOperatorDim / n) {
            throw ResourceError("n^m = " + std::to_string(n) + "^" + std::to_string(m) + " exceeds cap " +
                                std::to_string(kMaxOperatorDim));
        }
        total_ *= n;
    }
}

std::size_t NetworkShape::stride(std::size_t site) const {
    std::size_t s = 1;
    for (std::size_t i = site + 1; i < m_; ++i) {
        s *= n_;
    }
    return s;
}

std::size_t NetworkShape::digit(std::size_t index, std::size_t site) const { return (index / stride(site)) % n_; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const auto da = a.dim();
    const auto db = b.dim();
    if (da != 0 && db > kMaxOperatorDim / da) {
        throw ResourceError("kron: result dimension " + std::to_string(da * db) + " exceeds cap " +
                            std::to_string(kMaxOperatorDim));
    }
    ComplexMatrix r(da * db);
    for (std::size_t i = 0; i < da; ++i) {
        for (std::size_t j = 0; j < da; ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) {
                continue;
            }
            r.eigen().block(idx(i * db), idx(j * db), idx(db), idx(db)) = aij * b.eigen();
        }
    }
    return r;
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
    if (factors.empty()) {
        return ComplexMatrix::identity(1);
    }
    ComplexMatrix r = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) {
        r = kron(r, factors[i]);
    }
    return r;
}

ComplexMatrix kron_power(const ComplexMatrix& a, std::size_t times) {
    ComplexMatrix r = ComplexMatrix::identity(1);
    for (std::size_t i = 0; i < times; ++i) {
        r = kron(r, a);
    }
    return r;
}

ComplexMatrix partial_trace(const ComplexMatrix& x, const NetworkShape& shape, std::span<const std::size_t> keep) {
    if (x.dim() != shape.total_dim()) {
        throw ValidationError("partial_trace: operator dimension " + std::to_string(x.dim()) +
                              " does not match network dimension " + std::to_string(shape.total_dim()));
    }
    if (keep.empty()) {
        throw ValidationError("partial_trace: keep set must be nonempty");
    }
    const auto m = shape.sites();
    const auto n = shape.local_dim();
    std::vector<bool> kept(m, false);
    for (auto s : keep) {
        if (s >= m) {
            throw ValidationError("partial_trace: site " + std::to_string(s) + " out of range");
        }
        if (kept[s]) {
            throw ValidationError("partial_trace: duplicate site " + std::to_string(s));
        }
        kept[s] = true;
    }

    // Offsets contributed by the kept and traced digits; a composite index is
    // the sum of one kept offset and one traced offset.
    std::vector<std::size_t> kept_offsets{0};
    std::vector<std::size_t> traced_offsets{0};
    for (std::size_t site = 0; site < m; ++site) {
        auto& target = kept[site] ? kept_offsets : traced_offsets;
        std::vector<std::size_t> next;
        next.reserve(target.size() * n);
        for (auto base : target) {
            for (std::size_t d = 0; d < n; ++d) {
                next.push_back(base + d * shape.stride(site));
            }
        }
        target = std::move(next);
    }

    const auto out_dim = kept_offsets.size();
    ComplexMatrix r(out_dim);
    for (std::size_t a = 0; a < out_dim; ++a) {
        for (std::size_t b = 0; b < out_dim; ++b) {
            Complex acc{};
            for (auto t : traced_offsets) {
                acc += x(kept_offsets[a] + t, kept_offsets[b] + t);
            }
            r(a, b) = acc;
        }
    }
    return r;
}

ComplexMatrix reduced_state(const ComplexMatrix& x, const NetworkShape& shape, std::size_t site) {
    const std::size_t keep[] = {site};
    return partial_trace(x, shape, keep);
}

Eigh eigh(const ComplexMatrix& x) {
    const double defect = x.hermiticity_defect();
    if (defect > kHermitianTol) {
        throw ValidationError("eigh: input is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    // Symmetrize so round-off in the lower triangle does not leak in.
    const Eigen::MatrixXcd h = 0.5 * (x.eigen() + x.eigen().adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw CertificateError("eigh: eigensolver did not converge");
    }
    Eigh out;
    out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    out.vectors = ComplexMatrix(ComplexMatrix::Storage(solver.eigenvectors()));
    return out;
}

std::vector<Complex> eigenvalues_general(const ComplexMatrix& x) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(x.eigen()), false);
    if (solver.info() != Eigen::Success) {
        throw CertificateError("eigenvalues_general: eigensolver did not converge");
    }
    std::vector<Complex> values(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(values.begin(), values.end(), [](Complex a, Complex b) {
        if (std::abs(a) != std::abs(b)) {
            return std::abs(a) > std::abs(b);
        }
        return std::arg(a) < std::arg(b);
    });
    return values;
}

std::size_t numerical_rank(const Eigen::MatrixXcd& x, double tol) {
    if (x.size() == 0) {
        return 0;
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(x);
    const auto& s = svd.singularValues();
    const double scale = std::max(1.0, s.size() > 0 ? s(0) : 0.0);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > tol * scale) {
            ++rank;
        }
    }
    return rank;
}

double frobenius_norm(const ComplexMatrix& a) { return a.eigen().norm(); }

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "frobenius_distance");
    return (a.eigen() - b.eigen()).norm();
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "trace_product");
    // Tr[AB] = sum_ij A_ij B_ji
    return (a.eigen().array() * b.eigen().transpose().array()).sum();
}

ComplexVector vectorize(const ComplexMatrix& x) {
    const auto d = x.dim();
    ComplexVector v(idx(d * d));
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            v(idx(j * d + i)) = x(i, j);
        }
    }
    return v;
}

ComplexMatrix unvectorize(const ComplexVector& v) {
    const auto len = static_cast<std::size_t>(v.size());
    auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(len))));
    if (d * d != len) {
        throw ValidationError("unvectorize: length " + std::to_string(len) + " is not a perfect square");
    }
    ComplexMatrix x(d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            x(i, j) = v(idx(j * d + i));
        }
    }
    return x;
}

}  // namespace qcons
