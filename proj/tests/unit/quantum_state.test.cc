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

#include <cmath>

#include "gtest/gtest.h"

#include "oracles.hpp"
#include "qconsensus/errors.hpp"

using namespace qcons;

namespace {

std::vector<ComplexMatrix> permuted(const std::vector<ComplexMatrix>& factors, const Permutation& pi) {
    std::vector<ComplexMatrix> out;
    for (std::size_t i = 0; i < factors.size(); ++i) out.push_back(factors[pi(i)]);
    return out;
}

// Twirl by explicit sum over basis-label permutations.
ComplexMatrix twirl_oracle(const ComplexMatrix& x, std::size_t m, std::size_t n) {
    const auto dim = x.dim();
    ComplexMatrix out(dim);
    const auto perms = all_permutations(m);
    for (const auto& pi : perms) {
        std::vector<std::size_t> image(dim);
        for (std::size_t a = 0; a < dim; ++a) {
            const auto d = oracle::digits(a, m, n);
            std::vector<std::size_t> moved(m);
            for (std::size_t i = 0; i < m; ++i) moved[i] = d[pi(i)];
            image[a] = oracle::compose_index(moved, n);
        }
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b) out(image[a], image[b]) += x(a, b);
    }
    return out * Complex{1.0 / static_cast<double>(perms.size())};
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

}  // namespace

TEST(DensityOperator, AcceptsValidStates) {
    EXPECT_NO_THROW(DensityOperator(NetworkShape(1, 2), ComplexMatrix::identity(2) * Complex{0.5}));
}

TEST(DensityOperator, RejectsInvalidMatrices) {
    const NetworkShape s(1, 2);
    EXPECT_THROW(DensityOperator(s, ComplexMatrix{{1.0, 0.5}, {0.0, 0.0}}), ValidationError);
    EXPECT_THROW(DensityOperator(s, ComplexMatrix{{1.5, 0.0}, {0.0, -0.5}}), ValidationError);
    EXPECT_THROW(DensityOperator(s, ComplexMatrix{{0.6, 0.0}, {0.0, 0.6}}), ValidationError);
    EXPECT_THROW(DensityOperator(s, ComplexMatrix::identity(4) * Complex{0.25}), ValidationError);
}

TEST(Observable, SpectralProjectorsResolveIdentity) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Observable obs(oracle::random_herm(4, seed));
        ComplexMatrix sum(4);
        ComplexMatrix rebuilt(4);
        for (const auto& c : obs.spectrum()) {
            sum += c.projector;
            rebuilt += c.projector * Complex{c.eigenvalue};
            EXPECT_LT(frobenius_distance(c.projector * c.projector, c.projector), 1e-10);
            for (const auto& other : obs.spectrum()) {
                if (&other != &c) EXPECT_LT(frobenius_norm(c.projector * other.projector), 1e-10);
            }
        }
        EXPECT_LT(frobenius_distance(sum, ComplexMatrix::identity(4)), 1e-10);
        EXPECT_LT(frobenius_distance(rebuilt, obs.matrix()), 1e-10);
        EXPECT_TRUE(obs.nondegenerate());
    }
}

TEST(Observable, GroupsDegenerateEigenvalues) {
    const std::vector<Complex> d{1.0, 1.0 + 1e-12, -1.0};
    const Observable obs(ComplexMatrix::diagonal(d));
    EXPECT_EQ(obs.spectrum().size(), 2u);
    EXPECT_FALSE(obs.nondegenerate());
    const Observable id(ComplexMatrix::identity(3));
    EXPECT_EQ(id.spectrum().size(), 1u);
}

TEST(Observable, RejectsNonHermitian) {
    EXPECT_THROW(Observable(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}), ValidationError);
}

TEST(Pauli, AlgebraicRelations) {
    const Complex i{0.0, 1.0};
    EXPECT_LT(frobenius_distance(pauli_x() * pauli_y(), pauli_z() * i), 1e-15);
    EXPECT_EQ(pauli_x() * pauli_x(), ComplexMatrix::identity(2));
    EXPECT_EQ(pauli_y() * pauli_y(), ComplexMatrix::identity(2));
}

TEST(LiftLocal, MiddleSiteOfThree) {
    const NetworkShape s(3, 2);
    const auto id = ComplexMatrix::identity(2);
    EXPECT_EQ(lift_local(pauli_z(), 1, s), oracle::kron_list({id, pauli_z(), id}));
}

TEST(LiftLocal, IdentityLiftsToIdentity) {
    const NetworkShape s(4, 3);
    for (std::size_t site = 0; site < 4; ++site) {
        EXPECT_EQ(lift_local(ComplexMatrix::identity(3), site, s), ComplexMatrix::identity(81));
    }
}

TEST(LiftLocal, DifferentSitesCommute) {
    const NetworkShape s(3, 2);
    EXPECT_LT(frobenius_norm(commutator(lift_local(pauli_x(), 0, s), lift_local(pauli_y(), 1, s))), 1e-12);
    EXPECT_GT(frobenius_norm(commutator(lift_local(pauli_x(), 0, s), lift_local(pauli_y(), 0, s))), 1.0);
}

TEST(LiftLocal, MatchesKroneckerOracleForQutrits) {
    const NetworkShape s(3, 3);
    const auto sigma = oracle::random_herm(3, 5);
    const auto id = ComplexMatrix::identity(3);
    EXPECT_EQ(lift_local(sigma, 0, s), oracle::kron_list({sigma, id, id}));
    EXPECT_EQ(lift_local(sigma, 2, s), oracle::kron_list({id, id, sigma}));
}

TEST(LiftLocal, RejectsBadSiteOrDimension) {
    const NetworkShape s(2, 2);
    EXPECT_THROW(lift_local(pauli_z(), 2, s), ValidationError);
    EXPECT_THROW(lift_local(ComplexMatrix::identity(3), 0, s), ValidationError);
}

TEST(Permutation, RejectsNonBijections) {
    EXPECT_THROW(Permutation({0, 0}), ValidationError);
    EXPECT_THROW(Permutation({0, 2}), ValidationError);
    EXPECT_EQ(all_permutations(4).size(), 24u);
}

TEST(PermutationUnitary, IdentityPermutation) {
    const NetworkShape s(3, 2);
    EXPECT_EQ(permutation_unitary(Permutation::identity(3), s), ComplexMatrix::identity(8));
}

TEST(PermutationUnitary, SwapMovesBasisLabels) {
    const NetworkShape s(2, 2);
    const auto u = permutation_unitary(Permutation::transposition(2, 0, 1), s);
    // |0,1> is index 1, |1,0> is index 2.
    EXPECT_EQ(u(2, 1), Complex(1.0));
    EXPECT_EQ(u(1, 2), Complex(1.0));
    EXPECT_EQ(u(0, 0), Complex(1.0));
    EXPECT_EQ(u(3, 3), Complex(1.0));
}

TEST(PermutationUnitary, ConjugationPermutesProductFactors) {
    const NetworkShape s(3, 2);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::vector<ComplexMatrix> f{oracle::random_matrix(2, seed), oracle::random_matrix(2, seed + 100),
                                           oracle::random_matrix(2, seed + 200)};
        const auto x = oracle::kron_list(f);
        for (const auto& pi : all_permutations(3)) {
            const auto u = permutation_unitary(pi, s);
            const auto lhs = oracle::matmul(oracle::matmul(u, x), oracle::dagger(u));
            EXPECT_LT(oracle::max_abs(lhs, oracle::kron_list(permuted(f, pi))), 1e-12);
            EXPECT_LT(oracle::max_abs(conjugate_by_permutation(x, pi, s), lhs), 1e-12);
        }
    }
}

TEST(PermutationUnitary, ConjugationIdentityForQutrits) {
    const NetworkShape s(3, 3);
    const std::vector<ComplexMatrix> f{oracle::random_matrix(3, 1), oracle::random_matrix(3, 2),
                                       oracle::random_matrix(3, 3)};
    const auto x = oracle::kron_list(f);
    for (const auto& pi : all_permutations(3)) {
        EXPECT_LT(oracle::max_abs(conjugate_by_permutation(x, pi, s), oracle::kron_list(permuted(f, pi))), 1e-12);
    }
}

TEST(PermutationUnitary, UnitaryAndAntiHomomorphic) {
    const NetworkShape s(3, 2);
    const auto perms = all_permutations(3);
    for (const auto& pi : perms) {
        const auto u = permutation_unitary(pi, s);
        EXPECT_LT(frobenius_distance(u.adjoint() * u, ComplexMatrix::identity(8)), 1e-12);
        EXPECT_EQ(permutation_unitary(pi.inverse(), s), u.adjoint());
        for (const auto& tau : perms) {
            const auto product = u * permutation_unitary(tau, s);
            EXPECT_LT(frobenius_distance(product, permutation_unitary(compose(tau, pi), s)), 1e-12);
        }
    }
}

TEST(PermutationUnitary, BasisIndexMatchesDigitOracle) {
    const NetworkShape s(4, 3);
    const Permutation pi({2, 0, 3, 1});
    for (std::size_t a = 0; a < s.total_dim(); ++a) {
        const auto d = oracle::digits(a, 4, 3);
        const std::vector<std::size_t> moved{d[2], d[0], d[3], d[1]};
        EXPECT_EQ(permute_basis_index(a, pi, s), oracle::compose_index(moved, 3));
    }
}

TEST(Twirl, AlternatingFourQubitStateGivesSixTermMixture) {
    const auto rho = basis_state("1010");
    ComplexMatrix expected(16);
    for (const char* bits : {"1100", "1010", "1001", "0110", "0101", "0011"}) {
        expected += basis_state(bits).matrix() * Complex{1.0 / 6.0};
    }
    EXPECT_LT(frobenius_distance(twirl(rho).matrix(), expected), 1e-14);
}

TEST(Twirl, MaximallyMixedIsFixed) {
    const auto rho = parse_state_spec("rhoC");
    EXPECT_LT(frobenius_distance(twirl(rho).matrix(), rho.matrix()), 1e-15);
}

TEST(Twirl, PreservesSymmetricExpectations) {
    const NetworkShape s(4, 2);
    const auto big_s = average_local(pauli_z(), s);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto rho = random_density(s, seed);
        EXPECT_LT(std::abs(trace_product(big_s, twirl(rho).matrix()) - trace_product(big_s, rho.matrix())), 1e-12);
    }
}

TEST(Twirl, MatchesExplicitSumAndIsIdempotentProjection) {
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{3, 2}, {2, 3}, {4, 2}}) {
        const NetworkShape s(m, n);
        const auto rho = random_density(s, 17 + m);
        const auto t = twirl(rho).matrix();
        EXPECT_LT(frobenius_distance(t, twirl_oracle(rho.matrix(), m, n)), 1e-12);
        EXPECT_LT(frobenius_distance(twirl_operator(t, s), t), 1e-10);
        EXPECT_LT(max_swap_deviation(t, s), 1e-12);
        EXPECT_LT(std::abs(t.trace() - 1.0), 1e-12);
        EXPECT_GE(eigh(t).values.front(), -1e-10);
    }
}

TEST(Twirl, InvariantInputsAreFixedExactly) {
    const auto rho = parse_state_spec("rhoF");
    EXPECT_EQ(twirl(rho).matrix(), rho.matrix());
}

TEST(Twirl, NearestInvariantOperator) {
    const NetworkShape s(3, 2);
    const auto rho = random_density(s, 99);
    const auto t = twirl(rho).matrix();
    const double base = frobenius_distance(rho.matrix(), t);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto y = twirl_operator(oracle::random_herm(8, seed), s);
        y -= ComplexMatrix::identity(8) * Complex{y.trace().real() / 8.0};
        for (double eps : {1e-3, 1e-1, 1.0}) {
            EXPECT_GE(frobenius_distance(rho.matrix(), t + y * Complex{eps}), base - 1e-12);
        }
    }
}

TEST(Twirl, CapOnSites) {
    const NetworkShape s(9, 2);
    EXPECT_THROW(twirl_operator(ComplexMatrix::identity(512), s), ResourceError);
}

TEST(TwirlObservable, SingleSiteLiftBecomesAverage) {
    const NetworkShape s(3, 2);
    const auto out = twirl_observable(lift_local(pauli_z(), 0, s), s);
    EXPECT_LT(frobenius_distance(out, average_local(pauli_z(), s)), 1e-12);
}

TEST(TwirlObservable, FixedCasesAndValidation) {
    const NetworkShape s(2, 2);
    EXPECT_LT(frobenius_distance(twirl_observable(ComplexMatrix::identity(4), s), ComplexMatrix::identity(4)), 1e-15);
    const auto zz = kron(pauli_z(), pauli_z());
    EXPECT_LT(frobenius_distance(twirl_observable(zz, s), zz), 1e-15);
    EXPECT_THROW(twirl_observable(ComplexMatrix{{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}, s),
                 ValidationError);
}

TEST(TwirlObservable, CommutesWithEveryPermutation) {
    const NetworkShape s(3, 2);
    const auto q = twirl_observable(oracle::random_herm(8, 4), s);
    for (const auto& pi : all_permutations(3)) {
        const auto u = permutation_unitary(pi, s);
        EXPECT_LT(frobenius_norm(commutator(u, q)), 1e-12);
    }
}

TEST(KrausChannel, RejectsNonTracePreserving) {
    const NetworkShape s(1, 2);
    EXPECT_THROW(KrausChannel(s, {ComplexMatrix::identity(2) * Complex{0.9}}), ValidationError);
    EXPECT_THROW(KrausChannel(s, {ComplexMatrix::identity(4)}), ValidationError);
}

TEST(KrausChannel, IdentityChannelAndUnitalFlag) {
    const NetworkShape s(2, 2);
    const KrausChannel id(s, {ComplexMatrix::identity(4)});
    EXPECT_TRUE(id.unital());
    const auto rho = random_density(s, 3);
    EXPECT_EQ(apply_channel(id, rho).matrix(), rho.matrix());
    const auto xy = kron(pauli_x(), pauli_y());
    EXPECT_EQ(dual_apply(id, xy), xy);

    // Amplitude damping is trace preserving but not unital.
    const double g = 0.3;
    const KrausChannel damp(NetworkShape(1, 2), {ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1 - g)}},
                                                 ComplexMatrix{{0.0, std::sqrt(g)}, {0.0, 0.0}}});
    EXPECT_FALSE(damp.unital());
}

TEST(KrausChannel, HalfSwapOnBasisState) {
    const NetworkShape s(2, 2);
    const auto u = permutation_unitary(Permutation::transposition(2, 0, 1), s);
    const double h = std::sqrt(0.5);
    const KrausChannel ch(s, {ComplexMatrix::identity(4) * Complex{h}, u * Complex{h}});
    const auto out = apply_channel(ch, basis_state("01"));
    const auto expected = (basis_state("01").matrix() + basis_state("10").matrix()) * Complex{0.5};
    EXPECT_LT(frobenius_distance(out.matrix(), expected), 1e-15);
}

TEST(KrausChannel, TracePreservationAndDuality) {
    const NetworkShape s(2, 2);
    // A random mixture of two unitaries from eigenvectors of random Hermitians.
    const auto u1 = eigh(oracle::random_herm(4, 1)).vectors;
    const auto u2 = eigh(oracle::random_herm(4, 2)).vectors;
    const KrausChannel ch(s, {u1 * Complex{std::sqrt(0.3)}, u2 * Complex{std::sqrt(0.7)}});
    EXPECT_TRUE(ch.unital());
    EXPECT_LT(frobenius_distance(dual_apply(ch, ComplexMatrix::identity(4)), ComplexMatrix::identity(4)), 1e-12);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto rho = random_density(s, seed);
        const auto x = oracle::random_herm(4, seed + 7000);
        const auto out = apply_channel(ch, rho.matrix());
        EXPECT_LT(std::abs(out.trace() - 1.0), 1e-12);
        EXPECT_LT(std::abs(trace_product(x, out) - trace_product(dual_apply(ch, x), rho.matrix())), 1e-12);
    }
}

TEST(KrausChannel, UnitalChannelsDoNotDecreaseEntropy) {
    const NetworkShape s(2, 2);
    const auto u1 = eigh(oracle::random_herm(4, 11)).vectors;
    const KrausChannel ch(s, {ComplexMatrix::identity(4) * Complex{std::sqrt(0.4)}, u1 * Complex{std::sqrt(0.6)}});
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto rho = random_density(s, seed);
        EXPECT_GE(von_neumann_entropy(apply_channel(ch, rho).matrix()), von_neumann_entropy(rho.matrix()) - 1e-9);
    }
}

TEST(KrausChannel, SymmetricObservableIsDualFixedPoint) {
    const NetworkShape s(2, 2);
    const auto u = permutation_unitary(Permutation::transposition(2, 0, 1), s);
    const double h = std::sqrt(0.5);
    const KrausChannel ch(s, {ComplexMatrix::identity(4) * Complex{h}, u * Complex{h}});
    const auto big_s = average_local(pauli_z(), s);
    EXPECT_LT(frobenius_distance(dual_apply(ch, big_s), big_s), 1e-12);
}

TEST(RandomDensity, DeterministicBitForBit) {
    const NetworkShape s(3, 2);
    EXPECT_EQ(random_density(s, 1234).matrix(), random_density(s, 1234).matrix());
    EXPECT_NE(random_density(s, 1234).matrix(), random_density(s, 1235).matrix());
    EXPECT_EQ(random_hermitian(5, 9), random_hermitian(5, 9));
}

TEST(RandomDensity, ValidAndFullRankOverManySeeds) {
    const NetworkShape s(2, 2);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto rho = random_density(s, seed);
        EXPECT_TRUE(rho.matrix().is_hermitian());
        EXPECT_LT(std::abs(rho.matrix().trace() - 1.0), 1e-10);
        EXPECT_GT(eigh(rho.matrix()).values.front(), 0.0);
    }
}

TEST(NamedStates, ExampleFamily) {
    for (const char* name : {"rhoA", "rhoB", "rhoC", "rhoD", "rhoE", "rhoF"}) {
        const auto rho = parse_state_spec(name);
        EXPECT_EQ(rho.shape().sites(), 3u);
        EXPECT_EQ(rho.shape().local_dim(), 2u);
    }
    const auto e = parse_state_spec("rhoE");
    EXPECT_EQ(e.matrix(), basis_state("000").matrix());
    const auto f = parse_state_spec("rhoF");
    EXPECT_DOUBLE_EQ(f.matrix()(0, 7).real(), 0.5);
    EXPECT_DOUBLE_EQ(f.matrix()(7, 7).real(), 0.5);
}

TEST(NamedStates, RhoGAndDigits) {
    const auto g = parse_state_spec("rhoG:0.25:4");
    EXPECT_EQ(g.shape().sites(), 4u);
    EXPECT_DOUBLE_EQ(g.matrix()(0, 0).real(), 0.25);
    EXPECT_DOUBLE_EQ(g.matrix()(15, 15).real(), 0.75);
    const auto q = parse_state_spec("012", NetworkShape(3, 3));
    EXPECT_DOUBLE_EQ(q.matrix()(5, 5).real(), 1.0);
    const auto r = parse_state_spec("random:5", NetworkShape(2, 2));
    EXPECT_EQ(r.matrix(), random_density(NetworkShape(2, 2), 5).matrix());
}

TEST(NamedStates, MalformedSpecsAreRejected) {
    EXPECT_THROW(parse_state_spec("rhoZ"), ValidationError);
    EXPECT_THROW(parse_state_spec("rhoG:1.5"), ValidationError);
    EXPECT_THROW(parse_state_spec("random:abc", NetworkShape(2, 2)), ValidationError);
    EXPECT_THROW(parse_state_spec("random:3"), ValidationError);
    EXPECT_THROW(parse_state_spec("0120"), ValidationError);
    EXPECT_THROW(parse_state_spec(""), ValidationError);
}
