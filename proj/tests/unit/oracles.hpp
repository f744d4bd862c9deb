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

// Independent reference implementations used only by the tests. None of
// these call into the library beyond ComplexMatrix storage and the Rng.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "qconsensus/linalg.hpp"
#include "qconsensus/rng.hpp"

namespace qcons::oracle {

inline ComplexMatrix random_matrix(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    ComplexMatrix out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) out(i, j) = Complex{rng.normal(), rng.normal()};
    }
    return out;
}

inline ComplexMatrix random_herm(std::size_t dim, std::uint64_t seed) {
    const auto g = random_matrix(dim, seed);
    ComplexMatrix out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) out(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
    }
    return out;
}

// Element-wise Kronecker product.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const auto ad = a.dim();
    const auto bd = b.dim();
    ComplexMatrix out(ad * bd);
    for (std::size_t i = 0; i < ad; ++i)
        for (std::size_t j = 0; j < ad; ++j)
            for (std::size_t k = 0; k < bd; ++k)
                for (std::size_t l = 0; l < bd; ++l) out(i * bd + k, j * bd + l) = a(i, j) * b(k, l);
    return out;
}

inline ComplexMatrix kron_list(const std::vector<ComplexMatrix>& factors) {
    ComplexMatrix out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) out = oracle::kron(out, factors[i]);
    return out;
}

inline ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix out(dim);
    for (std::size_t i = 0; i < dim; ++i) out(i, i) = 1.0;
    return out;
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    const auto d = a.dim();
    ComplexMatrix out(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t j = 0; j < d; ++j) out(i, j) += a(i, k) * b(k, j);
    return out;
}

inline ComplexMatrix dagger(const ComplexMatrix& a) {
    ComplexMatrix out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) out(i, j) = std::conj(a(j, i));
    return out;
}

inline Complex trace(const ComplexMatrix& a) {
    Complex t = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

inline double max_abs(const ComplexMatrix& a, const ComplexMatrix& b) {
    double out = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) out = std::max(out, std::abs(a(i, j) - b(i, j)));
    return out;
}

inline double frob(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Base-n digits of a composite index, site 0 first.
inline std::vector<std::size_t> digits(std::size_t index, std::size_t m, std::size_t n) {
    std::vector<std::size_t> out(m);
    for (std::size_t i = m; i-- > 0;) {
        out[i] = index % n;
        index /= n;
    }
    return out;
}

inline std::size_t compose_index(const std::vector<std::size_t>& d, std::size_t n) {
    std::size_t out = 0;
    for (auto x : d) out = out * n + x;
    return out;
}

// Partial trace over every site not in `keep` (ascending), by explicit
// digit matching.
inline ComplexMatrix partial_trace(const ComplexMatrix& x, std::size_t m, std::size_t n,
                                   const std::vector<std::size_t>& keep) {
    std::size_t kd = 1;
    for (std::size_t i = 0; i < keep.size(); ++i) kd *= n;
    ComplexMatrix out(kd);
    const auto total = x.dim();
    for (std::size_t r = 0; r < total; ++r) {
        const auto dr = digits(r, m, n);
        for (std::size_t c = 0; c < total; ++c) {
            const auto dc = digits(c, m, n);
            bool traced_equal = true;
            for (std::size_t s = 0; s < m && traced_equal; ++s) {
                bool kept = false;
                for (auto k : keep) kept = kept || k == s;
                if (!kept && dr[s] != dc[s]) traced_equal = false;
            }
            if (!traced_equal) continue;
            std::vector<std::size_t> kr, kc;
            for (auto k : keep) {
                kr.push_back(dr[k]);
                kc.push_back(dc[k]);
            }
            out(compose_index(kr, n), compose_index(kc, n)) += x(r, c);
        }
    }
    return out;
}

inline double binomial(std::size_t n, std::size_t k) {
    double out = 1.0;
    for (std::size_t i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
    return out;
}

// Dimension of the permutation-invariant operators on (C^n)^{(x)m}: the
// number of multisets of size m drawn from n^2 matrix units.
inline std::size_t symmetric_operator_dim(std::size_t m, std::size_t n) {
    return static_cast<std::size_t>(std::llround(binomial(n * n + m - 1, m)));
}

inline ComplexMatrix ket_projector(const std::vector<Complex>& v) {
    ComplexMatrix out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out(i, j) = v[i] * std::conj(v[j]);
    return out;
}

inline ComplexMatrix basis_projector(const std::vector<std::size_t>& d, std::size_t n) {
    std::size_t dim = 1;
    for (std::size_t i = 0; i < d.size(); ++i) dim *= n;
    ComplexMatrix out(dim);
    const auto idx = compose_index(d, n);
    out(idx, idx) = 1.0;
    return out;
}

}  // namespace qcons::oracle
