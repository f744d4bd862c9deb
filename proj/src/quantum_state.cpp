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

#include "qconsensus/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qconsensus/errors.hpp"
#include "qconsensus/rng.hpp"

namespace qcons {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_shape_dim(const ComplexMatrix& x, const NetworkShape& shape, const char* what) {
    if (x.dim() != shape.total_dim()) {
        throw ValidationError(std::string(what) + ": operator dimension " + std::to_string(x.dim()) +
                              " does not match network dimension " + std::to_string(shape.total_dim()));
    }
}

void check_hermitian_unit_trace(const ComplexMatrix& m) {
    const double defect = m.hermiticity_defect();
    if (defect > kHermitianTol) {
        throw ValidationError("density operator is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    const Complex tr = m.trace();
    if (std::abs(tr - Complex{1.0}) > 1e-10) {
        throw ValidationError("density operator trace is " + std::to_string(tr.real()) + ", expected 1");
    }
}

// Index map a -> index of U_pi |a> over the whole basis.
std::vector<std::size_t> permutation_table(const Permutation& pi, const NetworkShape& shape) {
    std::vector<std::size_t> table(shape.total_dim());
    for (std::size_t a = 0; a < table.size(); ++a) {
        table[a] = permute_basis_index(a, pi, shape);
    }
    return table;
}

ComplexMatrix ginibre(std::size_t dim, Rng& rng) {
    ComplexMatrix g(dim);
    const double scale = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(i, j) = Complex{re, im} * scale;
        }
    }
    return g;
}

ComplexVector basis_ket(std::size_t dim, std::size_t index) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

}  // namespace

ComplexMatrix pauli_x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() { return ComplexMatrix{{0.0, -kI}, {kI, 0.0}}; }
ComplexMatrix pauli_z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }

DensityOperator::DensityOperator(NetworkShape shape, ComplexMatrix matrix)
    : shape_(shape), matrix_(std::move(matrix)) {
    require_shape_dim(matrix_, shape_, "DensityOperator");
    check_hermitian_unit_trace(matrix_);
    const auto eig = eigh(matrix_);
    if (!eig.values.empty() && eig.values.front() < -kPsdTol) {
        throw ValidationError("density operator has negative eigenvalue " + std::to_string(eig.values.front()));
    }
}

DensityOperator::DensityOperator(NetworkShape shape, ComplexMatrix matrix, PositiveByConstruction)
    : shape_(shape), matrix_(std::move(matrix)) {
    require_shape_dim(matrix_, shape_, "DensityOperator");
    check_hermitian_unit_trace(matrix_);
}

Complex DensityOperator::expectation(const ComplexMatrix& x) const { return trace_product(x, matrix_); }

Observable::Observable(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    const auto eig = eigh(matrix_);
    const auto dim = matrix_.dim();
    if (dim == 0) {
        throw ValidationError("Observable: empty matrix");
    }
    const double range = eig.values.back() - eig.values.front();
    const double threshold = kGroupingTol * range;

    std::size_t start = 0;
    while (start < dim) {
        std::size_t end = start + 1;
        while (end < dim && eig.values[end] - eig.values[end - 1] <= threshold) {
            ++end;
        }
        ComplexMatrix proj(dim);
        double mean = 0.0;
        for (std::size_t k = start; k < end; ++k) {
            const ComplexVector v = eig.vectors.eigen().col(static_cast<Eigen::Index>(k));
            proj += ComplexMatrix::outer(v, v);
            mean += eig.values[k];
        }
        spectrum_.push_back({mean / static_cast<double>(end - start), std::move(proj)});
        start = end;
    }
}

Permutation::Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (auto v : image_) {
        if (v >= image_.size() || seen[v]) {
            throw ValidationError("Permutation: mapping is not a bijection of 0.." +
                                  std::to_string(image_.size() == 0 ? 0 : image_.size() - 1));
        }
        seen[v] = true;
    }
}

Permutation Permutation::identity(std::size_t m) {
    std::vector<std::size_t> img(m);
    std::iota(img.begin(), img.end(), 0);
    return Permutation(std::move(img));
}

Permutation Permutation::transposition(std::size_t m, std::size_t j, std::size_t k) {
    if (j >= m || k >= m) {
        throw ValidationError("transposition: site out of range");
    }
    auto p = identity(m).image();
    std::swap(p[j], p[k]);
    return Permutation(std::move(p));
}

Permutation Permutation::inverse() const {
    std::vector<std::size_t> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) {
        inv[image_[i]] = i;
    }
    return Permutation(std::move(inv));
}

Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) {
        throw ValidationError("compose: permutation sizes differ");
    }
    std::vector<std::size_t> img(a.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        img[i] = a(b(i));
    }
    return Permutation(std::move(img));
}

std::vector<Permutation> all_permutations(std::size_t m) {
    std::vector<std::size_t> img(m);
    std::iota(img.begin(), img.end(), 0);
    std::vector<Permutation> out;
    do {
        out.emplace_back(img);
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

ComplexMatrix lift_local(const ComplexMatrix& sigma, std::size_t site, const NetworkShape& shape) {
    if (sigma.dim() != shape.local_dim()) {
        throw ValidationError("lift_local: local operator has dimension " + std::to_string(sigma.dim()) +
                              ", expected " + std::to_string(shape.local_dim()));
    }
    if (site >= shape.sites()) {
        throw ValidationError("lift_local: site " + std::to_string(site) + " out of range for " +
                              std::to_string(shape.sites()) + " sites");
    }
    const auto left = ComplexMatrix::identity(shape.total_dim() / (shape.stride(site) * shape.local_dim()));
    const auto right = ComplexMatrix::identity(shape.stride(site));
    return kron(kron(left, sigma), right);
}

ComplexMatrix average_local(const ComplexMatrix& sigma, const NetworkShape& shape) {
    ComplexMatrix s(shape.total_dim());
    for (std::size_t i = 0; i < shape.sites(); ++i) {
        s += lift_local(sigma, i, shape);
    }
    return s * Complex{1.0 / static_cast<double>(shape.sites())};
}

std::size_t permute_basis_index(std::size_t index, const Permutation& pi, const NetworkShape& shape) {
    if (pi.size() != shape.sites()) {
        throw ValidationError("permutation size does not match the number of sites");
    }
    std::size_t out = 0;
    for (std::size_t i = 0; i < shape.sites(); ++i) {
        out += shape.digit(index, pi(i)) * shape.stride(i);
    }
    return out;
}

ComplexMatrix permutation_unitary(const Permutation& pi, const NetworkShape& shape) {
    const auto table = permutation_table(pi, shape);
    ComplexMatrix u(shape.total_dim());
    for (std::size_t a = 0; a < table.size(); ++a) {
        u(table[a], a) = 1.0;
    }
    return u;
}

ComplexMatrix conjugate_by_permutation(const ComplexMatrix& x, const Permutation& pi, const NetworkShape& shape) {
    require_shape_dim(x, shape, "conjugate_by_permutation");
    const auto table = permutation_table(pi, shape);
    ComplexMatrix out(x.dim());
    for (std::size_t a = 0; a < table.size(); ++a) {
        for (std::size_t b = 0; b < table.size(); ++b) {
            out(table[a], table[b]) = x(a, b);
        }
    }
    return out;
}

ComplexMatrix twirl_operator(const ComplexMatrix& x, const NetworkShape& shape) {
    require_shape_dim(x, shape, "twirl");
    if (shape.sites() > kMaxTwirlSites) {
        throw ResourceError("twirl: " + std::to_string(shape.sites()) + " sites exceeds the cap of " +
                            std::to_string(kMaxTwirlSites));
    }
    const auto perms = all_permutations(shape.sites());
    const auto dim = x.dim();
    ComplexMatrix acc(dim);
    for (const auto& pi : perms) {
        const auto table = permutation_table(pi, shape);
        for (std::size_t a = 0; a < dim; ++a) {
            for (std::size_t b = 0; b < dim; ++b) {
                acc(table[a], table[b]) += x(a, b);
            }
        }
    }
    return acc * Complex{1.0 / static_cast<double>(perms.size())};
}

DensityOperator twirl(const DensityOperator& rho) {
    return DensityOperator(rho.shape(), twirl_operator(rho.matrix(), rho.shape()),
                           DensityOperator::PositiveByConstruction{});
}

ComplexMatrix twirl_observable(const ComplexMatrix& q, const NetworkShape& shape) {
    const double defect = q.hermiticity_defect();
    if (defect > kHermitianTol) {
        throw ValidationError("twirl_observable: input is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    // U_pi^dag = U_{pi^-1}, and pi -> pi^-1 is a bijection of S_m.
    return twirl_operator(q, shape);
}

double max_swap_deviation(const ComplexMatrix& x, const NetworkShape& shape) {
    require_shape_dim(x, shape, "max_swap_deviation");
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < shape.sites(); ++i) {
        const auto swapped = conjugate_by_permutation(x, Permutation::transposition(shape.sites(), i, i + 1), shape);
        worst = std::max(worst, frobenius_distance(swapped, x));
    }
    return worst;
}

KrausChannel::KrausChannel(NetworkShape shape, std::vector<ComplexMatrix> kraus_ops)
    : shape_(shape), ops_(std::move(kraus_ops)) {
    if (ops_.empty()) {
        throw ValidationError("KrausChannel: at least one Kraus operator is required");
    }
    const auto dim = shape_.total_dim();
    ComplexMatrix tp(dim);
    ComplexMatrix un(dim);
    for (const auto& a : ops_) {
        require_shape_dim(a, shape_, "KrausChannel");
        tp += a.adjoint() * a;
        un += a * a.adjoint();
    }
    const auto id = ComplexMatrix::identity(dim);
    const double tp_err = tp.max_abs_diff(id);
    if (tp_err > kTraceTol) {
        throw ValidationError("KrausChannel: sum A^dag A deviates from identity by " + std::to_string(tp_err));
    }
    unital_ = un.max_abs_diff(id) <= kTraceTol;
}

ComplexMatrix apply_channel(const KrausChannel& ch, const ComplexMatrix& x) {
    require_shape_dim(x, ch.shape(), "apply_channel");
    ComplexMatrix out(x.dim());
    for (const auto& a : ch.kraus_ops()) {
        out += a * x * a.adjoint();
    }
    return out;
}

DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho) {
    if (!(rho.shape() == ch.shape())) {
        throw ValidationError("apply_channel: state and channel shapes differ");
    }
    try {
        return DensityOperator(rho.shape(), apply_channel(ch, rho.matrix()), DensityOperator::PositiveByConstruction{});
    } catch (const ValidationError& e) {
        throw CertificateError(std::string("apply_channel: malformed channel output: ") + e.what());
    }
}

ComplexMatrix dual_apply(const KrausChannel& ch, const ComplexMatrix& x) {
    require_shape_dim(x, ch.shape(), "dual_apply");
    ComplexMatrix out(x.dim());
    for (const auto& a : ch.kraus_ops()) {
        out += a.adjoint() * x * a;
    }
    return out;
}

DensityOperator random_density(const NetworkShape& shape, std::uint64_t seed) {
    Rng rng(seed);
    const auto g = ginibre(shape.total_dim(), rng);
    ComplexMatrix rho = g * g.adjoint();
    // Exact Hermitian symmetrization removes round-off asymmetry.
    rho = (rho + rho.adjoint()) * Complex{0.5};
    rho *= Complex{1.0 / rho.trace().real()};
    return DensityOperator(shape, std::move(rho));
}

ComplexMatrix random_hermitian(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    const auto g = ginibre(dim, rng);
    return (g + g.adjoint()) * Complex{0.5};
}

ComplexVector random_ket(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    ComplexVector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        v(i) = Complex{re, im};
    }
    return v / v.norm();
}

double von_neumann_entropy(const ComplexMatrix& rho) {
    double s = 0.0;
    for (double lambda : eigh(rho).values) {
        if (lambda > 1e-15) {
            s -= lambda * std::log(lambda);
        }
    }
    return s;
}

DensityOperator basis_state(std::string_view digits, std::size_t n) {
    if (digits.empty()) {
        throw ValidationError("basis state: empty digit string");
    }
    NetworkShape shape(digits.size(), n);
    std::size_t index = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        const char c = digits[i];
        if (c < '0' || c > '9' || static_cast<std::size_t>(c - '0') >= n) {
            throw ValidationError("basis state: digit '" + std::string(1, c) + "' at position " + std::to_string(i) +
                                  " is not a valid level for local dimension " + std::to_string(n));
        }
        index += static_cast<std::size_t>(c - '0') * shape.stride(i);
    }
    ComplexMatrix rho(shape.total_dim());
    rho(index, index) = 1.0;
    return DensityOperator(shape, std::move(rho));
}

DensityOperator rho_g(double p, std::size_t m) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ValidationError("rhoG: p must lie in (0, 1)");
    }
    NetworkShape shape(m, 2);
    ComplexMatrix rho(shape.total_dim());
    rho(0, 0) = p;
    rho(shape.total_dim() - 1, shape.total_dim() - 1) = 1.0 - p;
    return DensityOperator(shape, std::move(rho));
}

namespace {

DensityOperator example_state(char which) {
    const NetworkShape shape(3, 2);
    const auto id2 = ComplexMatrix::identity(2);
    const ComplexMatrix plus_unnorm{{1.0, 1.0}, {1.0, 1.0}};  // (|0>+|1>)(<0|+<1|)
    const auto ket = [](std::size_t dim, std::size_t i) { return basis_ket(dim, i); };

    switch (which) {
        case 'A':
            return {shape, kron(kron(id2, plus_unnorm), plus_unnorm) * Complex{1.0 / 8.0}};
        case 'B': {
            const ComplexVector bell = ket(4, 0) + ket(4, 3);
            return {shape, kron(id2, ComplexMatrix::outer(bell, bell)) * Complex{1.0 / 4.0}};
        }
        case 'C':
            return {shape, ComplexMatrix::identity(8) * Complex{1.0 / 8.0}};
        case 'D':
            return {shape, (ComplexMatrix::outer(ket(8, 0), ket(8, 0)) + ComplexMatrix::outer(ket(8, 7), ket(8, 7))) *
                               Complex{0.5}};
        case 'E':
            return {shape, ComplexMatrix::outer(ket(8, 0), ket(8, 0))};
        case 'F': {
            const ComplexVector ghz = ket(8, 0) + ket(8, 7);
            return {shape, ComplexMatrix::outer(ghz, ghz) * Complex{0.5}};
        }
        default:
            throw ValidationError(std::string("unknown example state rho") + which);
    }
}

double parse_double(std::string_view text, std::string_view what) {
    std::size_t used = 0;
    const std::string s(text);
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) {
        throw ValidationError(std::string(what) + ": '" + s + "' is not a number");
    }
    return v;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
    const std::string s(text);
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw ValidationError(std::string(what) + ": '" + s + "' is not a non-negative integer");
    }
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw ValidationError(std::string(what) + ": '" + s + "' is out of range");
    }
}

}  // namespace

DensityOperator parse_state_spec(std::string_view spec, const std::optional<NetworkShape>& shape) {
    auto check_shape = [&](const DensityOperator& rho) {
        if (shape && !(*shape == rho.shape())) {
            throw ValidationError("state '" + std::string(spec) + "' has " + std::to_string(rho.shape().sites()) +
                                  " sites of dimension " + std::to_string(rho.shape().local_dim()) +
                                  ", which does not match the requested network");
        }
        return rho;
    };

    if (spec.size() == 4 && spec.substr(0, 3) == "rho" && spec[3] >= 'A' && spec[3] <= 'F') {
        return check_shape(example_state(spec[3]));
    }
    if (spec.substr(0, 4) == "rhoG") {
        auto rest = spec.substr(4);
        double p = 0.5;
        std::size_t m = shape ? shape->sites() : 3;
        if (!rest.empty()) {
            if (rest.front() != ':') {
                throw ValidationError("state: malformed rhoG spec '" + std::string(spec) + "'");
            }
            rest.remove_prefix(1);
            const auto colon = rest.find(':');
            p = parse_double(rest.substr(0, colon), "rhoG p");
            if (colon != std::string_view::npos) {
                m = static_cast<std::size_t>(parse_u64(rest.substr(colon + 1), "rhoG m"));
            }
        }
        return check_shape(rho_g(p, m));
    }
    if (spec.substr(0, 7) == "random:") {
        if (!shape) {
            throw ValidationError("state: 'random:<seed>' requires the network shape (m, n)");
        }
        return random_density(*shape, parse_u64(spec.substr(7), "random seed"));
    }
    if (!spec.empty() && spec.find_first_not_of("0123456789") == std::string_view::npos) {
        return check_shape(basis_state(spec, shape ? shape->local_dim() : 2));
    }
    throw ValidationError("state: unrecognized state spec '" + std::string(spec) +
                          "' (expected rhoA..rhoG, a digit string, or random:<seed>)");
}

std::optional<ComplexMatrix> named_pauli(std::string_view name) {
    if (name == "x") return pauli_x();
    if (name == "y") return pauli_y();
    if (name == "z") return pauli_z();
    if (name == "identity" || name == "i") return ComplexMatrix::identity(2);
    return std::nullopt;
}

}  // namespace qcons
