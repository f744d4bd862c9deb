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

// Dense complex linear algebra used throughout the library.
//
// Multipartite index convention: for a network of m sites with local
// dimension n, the basis state |x_0, ..., x_{m-1}> has composite index
// sum_i x_i * n^(m-1-i), i.e. site 0 is the most significant digit. This is
// the ordering produced by kron(a, b) with composite index i * b.dim() + k.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qcons {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

/// Largest operator dimension any ComplexMatrix may have.
inline constexpr std::size_t kMaxOperatorDim = 4096;

inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kReconstructionTol = 1e-10;

/// Dense square complex matrix. Entries are stored row-major (column index
/// fastest), so data()[i * dim() + j] is entry (i, j).
class ComplexMatrix {
   public:
    using Storage = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    ComplexMatrix() = default;
    /// Zero matrix of the given dimension.
    explicit ComplexMatrix(std::size_t dim);
    /// Adopts an Eigen matrix; throws ValidationError if it is not square.
    explicit ComplexMatrix(Storage m);
    /// Builds a matrix from nested rows; throws if ragged or non-square.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const Complex> diag);
    /// Outer product |a><b|.
    static ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b);
    static ComplexMatrix from_row_major(std::size_t dim, std::span<const Complex> entries);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    std::span<const Complex> data() const { return {m_.data(), static_cast<std::size_t>(m_.size())}; }

    Complex& operator()(std::size_t i, std::size_t j) { return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }
    const Complex& operator()(std::size_t i, std::size_t j) const {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    const Storage& eigen() const { return m_; }
    Storage& eigen() { return m_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix conjugate() const;
    ComplexMatrix transpose() const;
    Complex trace() const { return m_.trace(); }

    /// Largest |a_ij - conj(a_ji)|.
    double hermiticity_defect() const;
    bool is_hermitian(double tol = kHermitianTol) const { return hermiticity_defect() <= tol; }
    /// Largest |a_ij - b_ij|; dimensions must match.
    double max_abs_diff(const ComplexMatrix& other) const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v);

    friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) {
        return a.dim() == b.dim() && a.m_ == b.m_;
    }

   private:
    Storage m_;
};

/// m isomorphic subsystems of local dimension n.
class NetworkShape {
   public:
    /// Throws ValidationError for m < 1 or n < 2 and ResourceError when
    /// n^m exceeds kMaxOperatorDim.
    NetworkShape(std::size_t m, std::size_t n);

    std::size_t sites() const { return m_; }
    std::size_t local_dim() const { return n_; }
    std::size_t total_dim() const { return total_; }

    /// Digit of `site` in a composite basis index.
    std::size_t digit(std::size_t index, std::size_t site) const;
    /// Weight n^(m-1-site) of a site in composite indices.
    std::size_t stride(std::size_t site) const;

    friend bool operator==(const NetworkShape&, const NetworkShape&) = default;

   private:
    std::size_t m_;
    std::size_t n_;
    std::size_t total_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// kron of a list of factors, left to right.
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);
/// a^{\otimes times}.
ComplexMatrix kron_power(const ComplexMatrix& a, std::size_t times);

/// Partial trace keeping the listed sites (0-based, any order, no
/// duplicates). The kept sites appear in ascending order in the result.
ComplexMatrix partial_trace(const ComplexMatrix& x, const NetworkShape& shape, std::span<const std::size_t> keep);

/// Single-site reduced operator of `site`.
ComplexMatrix reduced_state(const ComplexMatrix& x, const NetworkShape& shape, std::size_t site);

struct Eigh {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // columns are eigenvectors
};

/// Hermitian eigendecomposition. Throws ValidationError when the input is
/// not Hermitian to kHermitianTol (max-entry norm).
Eigh eigh(const ComplexMatrix& x);

/// Eigenvalues of a general square matrix, sorted by descending modulus
/// then by argument.
std::vector<Complex> eigenvalues_general(const ComplexMatrix& x);

/// Number of singular values of x above tol * max(1, largest singular value).
std::size_t numerical_rank(const Eigen::MatrixXcd& x, double tol);

double frobenius_norm(const ComplexMatrix& a);
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr[a b] without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column stacking: v[j * dim + i] = x(i, j). With this convention
/// vectorize(A X B) = kron(B^T, A) vectorize(X).
ComplexVector vectorize(const ComplexMatrix& x);
/// Inverse of vectorize; throws ValidationError if the length is not a
/// perfect square.
ComplexMatrix unvectorize(const ComplexVector& v);

}  // namespace qcons
