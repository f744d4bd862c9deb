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

// Quantum vocabulary on top of linalg: states, observables, subsystem
// permutations, the symmetrization twirl and channels in Kraus form.
//
// Sites are 0-based throughout the library.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qconsensus/linalg.hpp"

namespace qcons {

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Hermitian, positive semidefinite, unit-trace operator on a network.
class DensityOperator {
   public:
    /// Full validation: Hermitian to 1e-9, eigenvalues >= -1e-10, trace 1
    /// to 1e-10. Throws ValidationError otherwise.
    DensityOperator(NetworkShape shape, ComplexMatrix matrix);

    /// Skips the eigenvalue check; used for outputs of CPTP maps where
    /// positivity holds by construction. Hermiticity and trace are still
    /// checked.
    struct PositiveByConstruction {};
    DensityOperator(NetworkShape shape, ComplexMatrix matrix, PositiveByConstruction);

    const NetworkShape& shape() const { return shape_; }
    const ComplexMatrix& matrix() const { return matrix_; }

    /// Tr[x rho].
    Complex expectation(const ComplexMatrix& x) const;

   private:
    NetworkShape shape_;
    ComplexMatrix matrix_;
};

struct SpectralComponent {
    double eigenvalue;
    ComplexMatrix projector;
};

/// Hermitian operator together with its spectral decomposition into
/// eigenvalue-grouped orthogonal projectors.
class Observable {
   public:
    /// Relative tolerance (w.r.t. the spectral range) below which adjacent
    /// eigenvalues are merged into one group.
    static constexpr double kGroupingTol = 1e-8;

    /// Throws ValidationError if the matrix is not Hermitian.
    explicit Observable(ComplexMatrix matrix);

    const ComplexMatrix& matrix() const { return matrix_; }
    std::size_t dim() const { return matrix_.dim(); }
    const std::vector<SpectralComponent>& spectrum() const { return spectrum_; }
    bool nondegenerate() const { return spectrum_.size() == matrix_.dim(); }

   private:
    ComplexMatrix matrix_;
    std::vector<SpectralComponent> spectrum_;
};

/// A permutation pi of the sites {0..m-1}, stored as image[i] = pi(i).
class Permutation {
   public:
    /// Throws ValidationError if the mapping is not a bijection of 0..m-1.
    explicit Permutation(std::vector<std::size_t> image);

    static Permutation identity(std::size_t m);
    /// Transposition of sites j and k.
    static Permutation transposition(std::size_t m, std::size_t j, std::size_t k);

    std::size_t size() const { return image_.size(); }
    std::size_t operator()(std::size_t i) const { return image_[i]; }
    const std::vector<std::size_t>& image() const { return image_; }
    Permutation inverse() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

   private:
    std::vector<std::size_t> image_;
};

/// (a o b)(i) = a(b(i)).
Permutation compose(const Permutation& a, const Permutation& b);

/// All m! permutations in lexicographic order of their image vectors.
std::vector<Permutation> all_permutations(std::size_t m);

/// sigma on `site`, identity elsewhere. Throws ValidationError if
/// sigma.dim() != n or the site is out of range.
ComplexMatrix lift_local(const ComplexMatrix& sigma, std::size_t site, const NetworkShape& shape);

/// (1/m) sum_i sigma^{(i)}.
ComplexMatrix average_local(const ComplexMatrix& sigma, const NetworkShape& shape);

/// U_pi, defined by U_pi (X_0 (x) ... (x) X_{m-1}) U_pi^dag =
/// X_{pi(0)} (x) ... (x) X_{pi(m-1)}: site i of the output carries what
/// site pi(i) carried in the input. On basis kets,
/// U_pi |x_0, ..., x_{m-1}> = |x_{pi(0)}, ..., x_{pi(m-1)}>.
///
/// Worked example (m = 2, the swap (0 1)): U |0,1> = |1,0>, and
/// U (A (x) B) U^dag = B (x) A.
///
/// With this convention U_pi U_tau = U_{tau o pi}.
ComplexMatrix permutation_unitary(const Permutation& pi, const NetworkShape& shape);

/// Composite index of U_pi |index>.
std::size_t permute_basis_index(std::size_t index, const Permutation& pi, const NetworkShape& shape);

/// U_pi x U_pi^dag by index relabeling, without forming U_pi.
ComplexMatrix conjugate_by_permutation(const ComplexMatrix& x, const Permutation& pi, const NetworkShape& shape);

/// Largest m for which the m!-term twirl sum is evaluated.
inline constexpr std::size_t kMaxTwirlSites = 8;

/// (1/m!) sum_pi U_pi x U_pi^dag for any operator x. Throws ResourceError
/// when m > kMaxTwirlSites.
ComplexMatrix twirl_operator(const ComplexMatrix& x, const NetworkShape& shape);

DensityOperator twirl(const DensityOperator& rho);

/// (1/m!) sum_pi U_pi^dag q U_pi; rejects non-Hermitian q.
ComplexMatrix twirl_observable(const ComplexMatrix& q, const NetworkShape& shape);

/// max over adjacent transpositions of ||U x U^dag - x||_F. Adjacent
/// transpositions generate S_m, so this vanishes iff x is permutation
/// invariant.
double max_swap_deviation(const ComplexMatrix& x, const NetworkShape& shape);

/// Channel in operator-sum form, E(rho) = sum_k A_k rho A_k^dag.
class KrausChannel {
   public:
    static constexpr double kTraceTol = 1e-10;

    /// Throws ValidationError if any operator has the wrong dimension or
    /// sum A_k^dag A_k differs from I by more than kTraceTol.
    KrausChannel(NetworkShape shape, std::vector<ComplexMatrix> kraus_ops);

    const NetworkShape& shape() const { return shape_; }
    const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }
    /// sum A_k A_k^dag = I within kTraceTol.
    bool unital() const { return unital_; }

   private:
    NetworkShape shape_;
    std::vector<ComplexMatrix> ops_;
    bool unital_ = false;
};

DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho);
/// sum A_k rho A_k^dag on an arbitrary operator.
ComplexMatrix apply_channel(const KrausChannel& ch, const ComplexMatrix& x);
/// Heisenberg-picture map sum A_k^dag x A_k.
ComplexMatrix dual_apply(const KrausChannel& ch, const ComplexMatrix& x);

/// Ginibre state G G^dag / Tr(G G^dag) with standard complex Gaussian G
/// drawn from Rng(seed).
DensityOperator random_density(const NetworkShape& shape, std::uint64_t seed);
/// (G + G^dag) / 2 with G as above.
ComplexMatrix random_hermitian(std::size_t dim, std::uint64_t seed);
/// Haar-like unit vector (normalized complex Gaussian).
ComplexVector random_ket(std::size_t dim, std::uint64_t seed);

/// von Neumann entropy -Tr[rho log rho] (natural log).
double von_neumann_entropy(const ComplexMatrix& rho);

// Named states.

/// Computational basis state from a digit string such as "1010"; every
/// digit must be < n.
DensityOperator basis_state(std::string_view digits, std::size_t n = 2);

/// p |0..0><0..0| + (1 - p) |1..1><1..1| on m qubits, 0 < p < 1.
DensityOperator rho_g(double p, std::size_t m);

/// Resolves a state spec:
///   "rhoA".."rhoF"              three-qubit example states
///   "rhoG" | "rhoG:<p>" | "rhoG:<p>:<m>"
///   digit strings ("1010")      computational basis state, n from shape or 2
///   "random:<seed>"             Ginibre state; needs a shape
/// Throws ValidationError naming the problem.
DensityOperator parse_state_spec(std::string_view spec, const std::optional<NetworkShape>& shape = std::nullopt);

/// "x", "y", "z", "identity" (also "i").
std::optional<ComplexMatrix> named_pauli(std::string_view name);

}  // namespace qcons
