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

#include "qcensor/channel.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.h"
#include "qcensor/coherence.h"
#include "test_util.h"

using namespace qcensor;

namespace {

ComplexMatrix hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    return matrix_from_rows({{s, s}, {s, -s}});
}

}  // namespace

TEST(KrausChannel, construction_errors) {
    EXPECT_QCENSOR_ERROR(KrausChannel({2}, {2}, {}), ErrorCode::InvalidArgument);
    EXPECT_QCENSOR_ERROR(KrausChannel({2}, {2}, {ComplexMatrix::Identity(3, 2)}), ErrorCode::DimensionMismatch);
    ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
    bad(1, 0) = std::numeric_limits<double>::infinity();
    EXPECT_QCENSOR_ERROR(KrausChannel({2}, {2}, {bad}), ErrorCode::NonFinite);
}

TEST(KrausChannel, identity_and_unitary) {
    const DensityOperator rho = random_density({2, 3}, 3, 4);
    EXPECT_LT(max_abs_diff(apply(KrausChannel::identity({2, 3}), rho).matrix(), rho.matrix()), 1e-15);

    const KrausChannel h = KrausChannel::unitary({2}, hadamard());
    const DensityOperator out = apply(h, basis_state({2}, 0));
    EXPECT_LT(max_abs_diff(out.matrix(), plus_state(1).matrix()), 1e-15);
    EXPECT_FALSE(is_incoherent(h));
    EXPECT_TRUE(validate_kraus(h).trace_preserving);
}

TEST(ValidateKraus, detects_modes) {
    const KrausChannel half({2}, {2}, {ComplexMatrix::Identity(2, 2) * std::sqrt(0.5)},
                            TpMode::TraceNonIncreasing);
    const KrausVerdict v = validate_kraus(half);
    EXPECT_TRUE(v.valid);
    EXPECT_FALSE(v.trace_preserving);
    EXPECT_TRUE(v.trace_non_increasing);
    EXPECT_NEAR(v.deviation, 0.5, 1e-15);

    const KrausChannel loud({2}, {2}, {ComplexMatrix::Identity(2, 2) * 2.0});
    const KrausVerdict w = validate_kraus(loud);
    EXPECT_FALSE(w.valid);
    EXPECT_FALSE(w.trace_non_increasing);
    EXPECT_NEAR(w.excess, 3.0, 1e-14);
}

TEST(Apply, refuses_trace_non_increasing_channel) {
    const KrausChannel half = scaled(KrausChannel::identity({2}), 0.5);
    EXPECT_EQ(half.tp_mode(), TpMode::TraceNonIncreasing);
    EXPECT_QCENSOR_ERROR(apply(half, plus_state(1)), ErrorCode::NotTracePreserving);
    const Operator branch = apply_branch(half, plus_state(1));
    EXPECT_NEAR(branch.trace(), 0.5, 1e-15);
    EXPECT_QCENSOR_ERROR(apply(KrausChannel::identity({3}), plus_state(1)), ErrorCode::DimensionMismatch);
}

TEST(Apply, matches_kraus_sum_oracle) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const IncoherentChannel io = sample_random_io(4, 3, seed);
        const DensityOperator rho = random_density({4}, 2, seed + 77);
        EXPECT_LT(max_abs_diff(apply(io.channel(), rho).matrix(),
                               oracle::apply_kraus(io.channel().kraus(), rho.matrix())),
                  1e-14);
    }
}

TEST(ApplyOnSite, matches_tensor_with_identity) {
    const DensityOperator rho = random_density({2, 3, 2}, 5, 3);
    const KrausChannel local = sample_random_io(3, 2, 8).channel();
    const DensityOperator out = apply_on_site(local, rho, 1);
    std::vector<oracle::Matrix> global;
    for (const auto &k : local.kraus()) {
        global.push_back(oracle::kron(oracle::kron(ComplexMatrix::Identity(2, 2), k), ComplexMatrix::Identity(2, 2)));
    }
    EXPECT_LT(max_abs_diff(out.matrix(), oracle::apply_kraus(global, rho.matrix())), 1e-14);
    EXPECT_QCENSOR_ERROR(apply_on_site(local, rho, 0), ErrorCode::DimensionMismatch);
    EXPECT_QCENSOR_ERROR(apply_on_site(local, rho, 3), ErrorCode::IndexOutOfRange);
}

TEST(Compose, order_and_action) {
    const KrausChannel h = KrausChannel::unitary({2}, hadamard());
    const KrausChannel deph = dephasing_channel({2});
    const DensityOperator zero = basis_state({2}, 0);
    // Dephasing after the Hadamard gives I/2; the other order gives |+><+|.
    EXPECT_LT(max_abs_diff(apply(compose(deph, h), zero).matrix(), maximally_mixed({2}).matrix()), 1e-15);
    EXPECT_LT(max_abs_diff(apply(compose(h, deph), zero).matrix(), plus_state(1).matrix()), 1e-15);
    EXPECT_QCENSOR_ERROR(compose(h, KrausChannel::identity({3})), ErrorCode::DimensionMismatch);
}

TEST(TensorChannels, matches_kronecker_oracle) {
    const KrausChannel a = sample_random_io(2, 2, 1).channel();
    const KrausChannel b = sample_random_io(3, 2, 2).channel();
    const KrausChannel ab = tensor_channels({a, b});
    EXPECT_EQ(ab.size(), 4u);
    EXPECT_EQ(ab.in_dims(), (Dims{2, 3}));
    const DensityOperator rho = random_density({2, 3}, 6, 5);
    std::vector<oracle::Matrix> global;
    for (const auto &ka : a.kraus()) {
        for (const auto &kb : b.kraus()) {
            global.push_back(oracle::kron(ka, kb));
        }
    }
    EXPECT_LT(max_abs_diff(apply(ab, rho).matrix(), oracle::apply_kraus(global, rho.matrix())), 1e-14);
    EXPECT_TRUE(is_incoherent(ab));
}

TEST(IsIncoherent, structural_test_reports_location) {
    EXPECT_TRUE(is_incoherent(dephasing_channel({3})));
    const IncoherenceCheck c = is_incoherent(KrausChannel::unitary({2}, hadamard()));
    EXPECT_FALSE(c.incoherent);
    ASSERT_TRUE(c.kraus_index.has_value());
    EXPECT_EQ(*c.kraus_index, 0u);
    ASSERT_TRUE(c.column.has_value());
    EXPECT_EQ(*c.column, 0);
    // Entries below the structural zero threshold are ignored.
    ComplexMatrix almost = ComplexMatrix::Identity(2, 2);
    almost(1, 0) = 1e-14;
    EXPECT_TRUE(is_incoherent(KrausChannel({2}, {2}, {almost})));
}

TEST(FreeUnitary, matrix_inverse_and_errors) {
    const FreeUnitary u{{2, 0, 1}, {0.3, -1.1, 2.0}};
    const ComplexMatrix m = u.matrix();
    EXPECT_LT(max_abs_diff(m.adjoint() * m, ComplexMatrix::Identity(3, 3)), 1e-15);
    EXPECT_NEAR(std::abs(m(2, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::arg(m(2, 0)), 0.3, 1e-15);
    EXPECT_LT(max_abs_diff(u.inverse().matrix() * m, ComplexMatrix::Identity(3, 3)), 1e-15);
    EXPECT_TRUE(is_incoherent(make_free_unitary(u, 3)));
    EXPECT_QCENSOR_ERROR(make_free_unitary(FreeUnitary{{0, 0, 1}, {0, 0, 0}}, 3), ErrorCode::NotAPermutation);
    EXPECT_QCENSOR_ERROR(make_free_unitary(FreeUnitary{{0, 1}, {0, 0}}, 3), ErrorCode::NotAPermutation);
}

TEST(Swap, exchanges_sites) {
    const DensityOperator a = random_density({2}, 2, 1);
    const DensityOperator b = random_density({3}, 2, 2);
    const DensityOperator out = apply(swap_channel(2, 3), tensor(a, b));
    EXPECT_EQ(out.dims(), (Dims{3, 2}));
    EXPECT_LT(max_abs_diff(out.matrix(), tensor(b, a).matrix()), 1e-15);
    EXPECT_TRUE(is_incoherent(swap_channel(2, 3)));
}

TEST(PermuteSites, moves_site_i_to_perm_i) {
    const DensityOperator a = random_density({2}, 2, 1);
    const DensityOperator b = random_density({3}, 2, 2);
    const DensityOperator c = random_density({2}, 1, 3);
    // a -> position 2, b -> 0, c -> 1.
    const KrausChannel p = permute_sites({2, 3, 2}, {2, 0, 1});
    const DensityOperator out = apply(p, tensor({a, b, c}));
    EXPECT_EQ(out.dims(), (Dims{3, 2, 2}));
    EXPECT_LT(max_abs_diff(out.matrix(), tensor({b, c, a}).matrix()), 1e-15);
    EXPECT_QCENSOR_ERROR(permute_sites({2, 2}, {0, 0}), ErrorCode::NotAPermutation);
}

TEST(IoStructure, completion_is_trace_preserving_even_with_colliding_maps) {
    // f_0 sends both columns to row 0, so rescaling columns alone would leave
    // a cross term in sum M^dagger M.
    IoStructure s;
    s.dim_in = 2;
    s.dim_out = 2;
    s.column_map = {{0, 0}, {1, 0}};
    s.coeff = {{Complex(0.8, 0.1), Complex(0.5, -0.2)}, {Complex(0.3, 0.0), Complex(0.4, 0.4)}};
    ASSERT_TRUE(s.enforce_completeness());
    KrausChannel ch({2}, {2}, s.kraus_matrices());
    EXPECT_LT(validate_kraus(ch).deviation, 1e-13);
    EXPECT_TRUE(is_incoherent(ch));
}

TEST(IoStructure, reports_unsatisfiable_maps) {
    // A single operator mapping two columns onto one row cannot be completed.
    IoStructure s;
    s.dim_in = 2;
    s.dim_out = 2;
    s.column_map = {{0, 0}};
    s.coeff = {{1.0, 1.0}};
    EXPECT_FALSE(s.enforce_completeness());
}

TEST(IncoherentChannel, round_trip_and_rejection) {
    const IncoherentChannel io = sample_random_io(3, 4, 12);
    const IncoherentChannel back = IncoherentChannel::from_kraus(io.channel());
    EXPECT_LT(max_abs_diff(back.channel().completeness(), ComplexMatrix::Identity(3, 3)), 1e-12);
    for (std::size_t k = 0; k < io.channel().size(); ++k) {
        EXPECT_LT(max_abs_diff(back.channel().kraus()[k], io.channel().kraus()[k]), 1e-15);
    }
    EXPECT_QCENSOR_ERROR(IncoherentChannel::from_kraus(KrausChannel::unitary({2}, hadamard())),
                         ErrorCode::NotIncoherentFactor);
    IoStructure broken = io.structure();
    broken.coeff[0][0] *= 2.0;
    EXPECT_QCENSOR_ERROR(IncoherentChannel(broken, TpMode::TracePreserving), ErrorCode::NotTracePreserving);
}

TEST(SampleRandomIo, valid_incoherent_and_seeded) {
    for (int d = 2; d <= 4; ++d) {
        for (int k = 1; k <= 6; ++k) {
            const auto seed = static_cast<std::uint64_t>(100 * d + k);
            const IncoherentChannel io = sample_random_io(d, k, seed);
            EXPECT_EQ(io.channel().size(), static_cast<std::size_t>(k));
            EXPECT_TRUE(validate_kraus(io.channel()).trace_preserving);
            EXPECT_TRUE(is_incoherent(io.channel()));
            const IncoherentChannel again = sample_random_io(d, k, seed);
            EXPECT_EQ(max_abs_diff(io.channel().kraus()[0], again.channel().kraus()[0]), 0.0);
        }
    }
}

TEST(Sio, global_kraus_matches_kronecker_oracle_and_site_action) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SioChannel sio = sample_random_sio({2, 3}, 2, 3, seed);
        const DensityOperator rho = random_density({2, 3}, 3, seed + 50);

        std::vector<oracle::Matrix> global;
        for (const auto &term : sio.terms()) {
            for (const auto &k0 : term.factors[0].kraus()) {
                for (const auto &k1 : term.factors[1].kraus()) {
                    global.push_back(oracle::kron(k0, k1));
                }
            }
        }
        const auto expected = oracle::apply_kraus(global, rho.matrix());
        EXPECT_LT(max_abs_diff(apply(sio, rho).matrix(), expected), 1e-13);
        EXPECT_LT(max_abs_diff(apply(sio.to_kraus(), rho).matrix(), expected), 1e-13);
        EXPECT_TRUE(is_incoherent(sio.to_kraus()));
    }
}

TEST(Sio, build_rejects_bad_terms) {
    const KrausChannel keep0({2}, {2}, {matrix_from_rows({{1, 0}, {0, 0}})}, TpMode::TraceNonIncreasing);
    const KrausChannel keep1({2}, {2}, {matrix_from_rows({{0, 0}, {0, 1}})}, TpMode::TraceNonIncreasing);
    const KrausChannel id = KrausChannel::identity({2});

    // Measure site 0 and conditionally flip site 1: a valid one-way SIO.
    const KrausChannel flip({2}, {2}, {matrix_from_rows({{0, 1}, {1, 0}})});
    EXPECT_NO_THROW(build_sio({SioTerm{0, {keep0, id}}, SioTerm{1, {keep1, flip}}}));

    EXPECT_QCENSOR_ERROR(build_sio({SioTerm{0, {keep0, id}}}), ErrorCode::NotTracePreservingSum);
    EXPECT_QCENSOR_ERROR(build_sio({SioTerm{0, {KrausChannel::unitary({2}, hadamard()), id}}}),
                         ErrorCode::NotIncoherentFactor);
    EXPECT_QCENSOR_ERROR(build_sio({SioTerm{0, {id, id}}, SioTerm{1, {id}}}), ErrorCode::DimensionMismatch);
    EXPECT_QCENSOR_ERROR(build_sio({}), ErrorCode::InvalidArgument);
}

TEST(Sio, never_raises_l1_coherence) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const SioChannel sio = sample_random_sio({2, 2}, 2, 3, seed);
        const DensityOperator rho = random_density({2, 2}, 1, seed + 900);
        EXPECT_LE(l1_coherence(apply(sio, rho)), l1_coherence(rho) + 1e-9);
    }
}
