// Copyright 2026 The qcensor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcensor/state.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "test_util.h"

using namespace qcensor;

TEST(ValidateDensity, accepts_plus_state) {
    const auto m = matrix_from_rows({{0.5, 0.5}, {0.5, 0.5}});
    const DensityOperator rho = validate_density(m, {2});
    EXPECT_EQ(rho.dim(), 2u);
    EXPECT_EQ(rho.num_sites(), 1);
    EXPECT_NEAR(rho.purity(), 1.0, 1e-14);
}

TEST(ValidateDensity, error_codes) {
    EXPECT_QCENSOR_ERROR(validate_density(ComplexMatrix::Zero(2, 3), {2}), ErrorCode::NotSquare);
    EXPECT_QCENSOR_ERROR(validate_density(ComplexMatrix::Identity(3, 3) / 3.0, {2}), ErrorCode::DimensionMismatch);

    ComplexMatrix nan = ComplexMatrix::Identity(2, 2) / 2.0;
    nan(0, 1) = std::nan("");
    EXPECT_QCENSOR_ERROR(validate_density(nan, {2}), ErrorCode::NonFinite);

    EXPECT_QCENSOR_ERROR(validate_density(matrix_from_rows({{0.5, 0.3}, {0.0, 0.5}}), {2}), ErrorCode::NotHermitian);
    EXPECT_QCENSOR_ERROR(validate_density(ComplexMatrix::Identity(2, 2), {2}), ErrorCode::TraceNotOne);
    EXPECT_QCENSOR_ERROR(validate_density(matrix_from_rows({{1.5, 0.0}, {0.0, -0.5}}), {2}), ErrorCode::NotPositive);
}

TEST(ValidateDensity, tolerances_are_respected) {
    ComplexMatrix m = ComplexMatrix::Identity(2, 2) / 2.0;
    m(0, 0) += 5e-11;
    EXPECT_NO_THROW(validate_density(m, {2}));
    m(0, 0) += 1e-9;
    EXPECT_QCENSOR_ERROR(validate_density(m, {2}), ErrorCode::TraceNotOne);
    EXPECT_NO_THROW(validate_density(m, {2}, Tolerances{1e-10, 1e-9, 1e-8, 1e-10}));
}

TEST(RandomDensity, valid_and_deterministic) {
    for (int rank = 1; rank <= 6; ++rank) {
        const DensityOperator a = random_density({2, 3}, rank, 42);
        const DensityOperator b = random_density({2, 3}, rank, 42);
        EXPECT_EQ(max_abs_diff(a.matrix(), b.matrix()), 0.0);
        EXPECT_NO_THROW(validate_density(a.matrix(), a.dims()));
        const RealVector eig = hermitian_eigenvalues(a.matrix());
        int nonzero = 0;
        for (Eigen::Index i = 0; i < eig.size(); ++i) {
            nonzero += eig(i) > 1e-10 ? 1 : 0;
        }
        EXPECT_EQ(nonzero, rank);
    }
    EXPECT_QCENSOR_ERROR(random_density({2}, 3, 0), ErrorCode::RankTooLarge);
    EXPECT_QCENSOR_ERROR(random_density({2}, 0, 0), ErrorCode::RankTooLarge);
}

TEST(RandomDensity, ensemble_mean_is_maximally_mixed) {
    // Unitarily invariant ensemble: the average state is I/d.
    const int d = 3;
    ComplexMatrix mean = ComplexMatrix::Zero(d, d);
    const int samples = 4000;
    for (int s = 0; s < samples; ++s) {
        mean += random_density({d}, 2, static_cast<std::uint64_t>(s)).matrix();
    }
    mean /= samples;
    EXPECT_LT(max_abs_diff(mean, ComplexMatrix::Identity(d, d) / d), 0.02);
}

TEST(PartialTrace, matches_loop_oracle) {
    const Dims dims{2, 3, 2};
    const DensityOperator rho = random_density(dims, 4, 9);
    const std::vector<std::vector<int>> keeps{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    for (const auto &keep : keeps) {
        const DensityOperator red = partial_trace(rho, keep);
        const auto expected = oracle::partial_trace(rho.matrix(), dims, keep);
        EXPECT_LT(oracle::max_diff(red.matrix(), expected), 1e-14);
        EXPECT_NEAR(red.matrix().trace().real(), 1.0, 1e-12);
    }
}

TEST(PartialTrace, bell_marginal_is_maximally_mixed) {
    const DensityOperator bell = bell_state();
    EXPECT_LT(max_abs_diff(partial_trace(bell, {0}).matrix(), ComplexMatrix::Identity(2, 2) / 2.0), 1e-15);
    EXPECT_LT(max_abs_diff(partial_trace(bell, {1}).matrix(), ComplexMatrix::Identity(2, 2) / 2.0), 1e-15);
}

TEST(PartialTrace, undoes_tensor) {
    const DensityOperator a = random_density({3}, 2, 1);
    const DensityOperator b = random_density({2, 2}, 3, 2);
    const DensityOperator ab = tensor(a, b);
    EXPECT_EQ(ab.dims(), (Dims{3, 2, 2}));
    EXPECT_LT(max_abs_diff(ab.matrix(), oracle::kron(a.matrix(), b.matrix())), 1e-15);
    EXPECT_LT(max_abs_diff(partial_trace(ab, {0}).matrix(), a.matrix()), 1e-14);
    EXPECT_LT(max_abs_diff(partial_trace(ab, {1, 2}).matrix(), b.matrix()), 1e-14);
}

TEST(PartialTrace, errors) {
    const DensityOperator rho = plus_state(2);
    EXPECT_QCENSOR_ERROR(partial_trace(rho, {}), ErrorCode::EmptyKeepSet);
    EXPECT_QCENSOR_ERROR(partial_trace(rho, {2}), ErrorCode::IndexOutOfRange);
    EXPECT_QCENSOR_ERROR(partial_trace(rho, {-1}), ErrorCode::IndexOutOfRange);
}

TEST(Tensor, list_and_trivial) {
    const DensityOperator t = tensor(std::vector<DensityOperator>{});
    EXPECT_EQ(t.dim(), 1u);
    EXPECT_TRUE(t.dims().empty());
    const DensityOperator three = tensor({plus_state(1), basis_state({2}, 1), plus_state(1)});
    EXPECT_EQ(three.dims(), (Dims{2, 2, 2}));
    EXPECT_NEAR(three.matrix().trace().real(), 1.0, 1e-15);
}

TEST(Fidelity, known_values) {
    const DensityOperator plus = plus_state(1);
    const DensityOperator mixed = maximally_mixed({2});
    EXPECT_NEAR(fidelity(plus, mixed), 0.5, 1e-12);
    EXPECT_NEAR(fidelity(plus, plus), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(basis_state({2}, 0), basis_state({2}, 1)), 0.0, 1e-12);
    EXPECT_QCENSOR_ERROR(fidelity(plus, plus_state(2)), ErrorCode::DimensionMismatch);
}

TEST(Fidelity, pure_state_oracle_and_symmetry) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::VectorXcd psi = oracle::random_vector(4, rng);
        const DensityOperator pure = pure_state({2, 2}, psi);
        const DensityOperator sigma = random_density({2, 2}, 1 + trial % 4, static_cast<std::uint64_t>(trial));
        const double expected = (psi.adjoint() * sigma.matrix() * psi)(0, 0).real();
        EXPECT_NEAR(fidelity(pure, sigma), expected, 1e-9);
        EXPECT_NEAR(fidelity(sigma, pure), expected, 1e-9);
    }
}

TEST(TraceDistance, fuchs_van_de_graaf_bounds) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const DensityOperator a = random_density({3}, 1 + static_cast<int>(seed % 3), seed);
        const DensityOperator b = random_density({3}, 1 + static_cast<int>((seed + 1) % 3), seed + 1000);
        const double f = fidelity(a, b);
        const double t = trace_distance(a, b);
        EXPECT_LE(1.0 - std::sqrt(f), t + 1e-9);
        EXPECT_LE(t, std::sqrt(1.0 - f) + 1e-9);
        EXPECT_NEAR(t, trace_distance(b, a), 1e-12);
    }
}

TEST(NamedStates, shapes) {
    const DensityOperator ghz = ghz_state(3);
    EXPECT_NEAR(ghz(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(ghz(7, 7).real(), 0.5, 1e-15);
    EXPECT_NEAR(ghz(0, 7).real(), 0.5, 1e-15);
    EXPECT_NEAR(ghz(3, 3).real(), 0.0, 1e-15);

    const DensityOperator qutrit_ghz = ghz_state(Dims{3, 3});
    EXPECT_NEAR(qutrit_ghz(4, 4).real(), 0.5, 1e-15);

    const DensityOperator plus2 = plus_state(2);
    for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
            EXPECT_NEAR(plus2(i, j).real(), 0.25, 1e-15);
        }
    }
    EXPECT_QCENSOR_ERROR(basis_state({2}, 2), ErrorCode::IndexOutOfRange);
    EXPECT_QCENSOR_ERROR(diagonal_state({2}, {0.2, 0.2}), ErrorCode::TraceNotOne);
}

TEST(Normalize, rescales_subnormalized_operator) {
    Operator op{{2}, matrix_from_rows({{0.3, 0.1}, {0.1, 0.1}})};
    EXPECT_NEAR(op.trace(), 0.4, 1e-15);
    const DensityOperator rho = normalize(op);
    EXPECT_NEAR(rho(0, 0).real(), 0.75, 1e-15);
    EXPECT_QCENSOR_ERROR(normalize(Operator{{2}, ComplexMatrix::Zero(2, 2)}), ErrorCode::TraceNotOne);
}
