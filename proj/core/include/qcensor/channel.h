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

#ifndef QCENSOR_CHANNEL_H
#define QCENSOR_CHANNEL_H

#include <cstdint>
#include <optional>
#include <vector>

#include "qcensor/linalg.h"
#include "qcensor/state.h"

namespace qcensor {

enum class TpMode { TracePreserving, TraceNonIncreasing };

/// Entries with modulus at or below this count as structural zeros.
inline constexpr double kStructuralZero = 1e-12;

/// A completely positive map in Kraus form. Every Kraus operator is
/// out_total x in_total. The constructor checks shapes only; use
/// `validate_kraus` for the completeness relation.
class KrausChannel {
  public:
    KrausChannel(Dims in_dims, Dims out_dims, std::vector<ComplexMatrix> kraus,
                 TpMode mode = TpMode::TracePreserving);

    static KrausChannel identity(const Dims &dims);
    static KrausChannel unitary(const Dims &dims, const ComplexMatrix &u);

    const Dims &in_dims() const noexcept {
        return in_dims_;
    }
    const Dims &out_dims() const noexcept {
        return out_dims_;
    }
    const std::vector<ComplexMatrix> &kraus() const noexcept {
        return kraus_;
    }
    TpMode tp_mode() const noexcept {
        return mode_;
    }
    std::size_t size() const noexcept {
        return kraus_.size();
    }

    /// Sum of M^dagger M over the Kraus operators.
    ComplexMatrix completeness() const;

  private:
    Dims in_dims_;
    Dims out_dims_;
    std::vector<ComplexMatrix> kraus_;
    TpMode mode_;
};

/// Applies a trace-preserving channel. Throws NotTracePreserving for a
/// channel flagged trace-non-increasing (use `apply_branch`), and
/// DimensionMismatch when `rho` does not fit the input.
DensityOperator apply(const KrausChannel &ch, const DensityOperator &rho);

/// Applies any channel and returns the possibly subnormalized output.
Operator apply_branch(const KrausChannel &ch, const DensityOperator &rho);
Operator apply_branch(const KrausChannel &ch, const Operator &x);

/// Applies a single-site channel to one site of a multipartite state.
DensityOperator apply_on_site(const KrausChannel &ch, const DensityOperator &rho, int site);

struct KrausVerdict {
    bool valid = false;               // for the channel's declared mode
    bool trace_preserving = false;
    bool trace_non_increasing = false;
    double deviation = 0.0;           // max |sum M^dagger M - I| entry
    double excess = 0.0;              // largest eigenvalue of sum M^dagger M minus one, floored at 0
};

KrausVerdict validate_kraus(const KrausChannel &ch, const Tolerances &tol = {});

/// Channel whose action is late(early(.)); Kraus set is every product L_i E_j.
KrausChannel compose(const KrausChannel &late, const KrausChannel &early);

/// Parallel application; Kraus set is every tensor product of one Kraus
/// operator per factor.
KrausChannel tensor_channels(const std::vector<KrausChannel> &factors);

/// A channel scaled by sqrt(weight) on every Kraus operator, so that its
/// action is multiplied by `weight`. The result is trace-non-increasing.
KrausChannel scaled(const KrausChannel &ch, double weight);

struct IncoherenceCheck {
    bool incoherent = true;
    // Location of the first column with two or more structural nonzeros.
    std::optional<std::size_t> kraus_index;
    std::optional<Eigen::Index> column;

    explicit operator bool() const noexcept {
        return incoherent;
    }
};

/// Structural incoherent-operation test: every column of every Kraus
/// operator has at most one entry with modulus above `zero_tol`.
IncoherenceCheck is_incoherent(const KrausChannel &ch, double zero_tol = kStructuralZero);

/// U = sum_a exp(i phase[a]) |perm[a]><a|.
struct FreeUnitary {
    std::vector<int> permutation;
    std::vector<double> phases;

    FreeUnitary inverse() const;
    ComplexMatrix matrix() const;
    static FreeUnitary identity(int dim);
};

/// Throws NotAPermutation if the permutation is not a bijection of {0..dim-1}
/// or the phase count differs from `dim`.
KrausChannel make_free_unitary(const FreeUnitary &u, int dim);

/// Single Kraus M = sum_{a,b} |ab><ba|: input dims {dim_a, dim_b}, output
/// dims {dim_b, dim_a}.
KrausChannel swap_channel(int dim_a, int dim_b);

/// Unitary channel that moves input site i to output position perm[i].
KrausChannel permute_sites(const Dims &dims, const std::vector<int> &perm);

/// Structural description of an incoherent operation:
/// M_a = sum_b coeff[a][b] |map[a][b]><b|.
struct IoStructure {
    int dim_in = 0;
    int dim_out = 0;
    std::vector<std::vector<int>> column_map;
    std::vector<std::vector<Complex>> coeff;

    std::size_t num_kraus() const noexcept {
        return column_map.size();
    }
    std::vector<ComplexMatrix> kraus_matrices() const;

    /// Projects the coefficients onto the completeness constraint
    /// sum_a M_a^dagger M_a = I without touching the column maps. Columns are
    /// processed in order: column b is made orthogonal to the overlap of
    /// every earlier column b' on the operators where f_a(b) = f_a(b'), then
    /// normalized. Returns false when some column is forced to zero.
    bool enforce_completeness();
};

class IncoherentChannel {
  public:
    /// Builds from a structure; throws NotTracePreserving if `mode` is
    /// trace-preserving and the completeness relation fails.
    IncoherentChannel(IoStructure structure, TpMode mode = TpMode::TracePreserving);

    /// Recovers the column-map form from a Kraus channel. Throws
    /// NotIncoherentFactor if the structural test fails.
    static IncoherentChannel from_kraus(const KrausChannel &ch);

    const IoStructure &structure() const noexcept {
        return structure_;
    }
    const KrausChannel &channel() const noexcept {
        return channel_;
    }

  private:
    IoStructure structure_;
    KrausChannel channel_;
};

/// Random trace-preserving incoherent operation: uniform column maps,
/// complex Gaussian coefficients, then `IoStructure::enforce_completeness`.
/// Column maps are redrawn when a draw admits no completion.
IncoherentChannel sample_random_io(int dim, int n_kraus, std::uint64_t seed);

/// One term of a separable incoherent operation: a local (possibly
/// trace-non-increasing) incoherent map for every site.
struct SioTerm {
    int label = 0;
    std::vector<KrausChannel> factors;
};

/// sum_b (factor_1^b tensor ... tensor factor_n^b), trace preserving overall.
class SioChannel {
  public:
    const std::vector<SioTerm> &terms() const noexcept {
        return terms_;
    }
    const Dims &in_dims() const noexcept {
        return in_dims_;
    }
    const Dims &out_dims() const noexcept {
        return out_dims_;
    }
    int num_sites() const noexcept {
        return static_cast<int>(in_dims_.size());
    }

    /// Global Kraus list: all tensor products of one Kraus operator per
    /// factor, over all terms.
    KrausChannel to_kraus() const;

  private:
    friend SioChannel build_sio(std::vector<SioTerm> terms, const Tolerances &tol);
    std::vector<SioTerm> terms_;
    Dims in_dims_;
    Dims out_dims_;
};

/// Validates and assembles a separable incoherent operation. Throws
/// NotIncoherentFactor, DimensionMismatch or NotTracePreservingSum.
SioChannel build_sio(std::vector<SioTerm> terms, const Tolerances &tol = {});

/// Action computed term by term, applying each factor on its own site.
DensityOperator apply(const SioChannel &ch, const DensityOperator &rho);

/// Random one-way classically coordinated incoherent operation on
/// `site_dims`: sites act in a random order, each choosing a local
/// incoherent instrument (an IO channel with `n_kraus` operators split into
/// `n_branches` outcome groups) conditioned on the outcomes so far.
SioChannel sample_random_sio(const Dims &site_dims, int n_branches, int n_kraus, std::uint64_t seed);

}  // namespace qcensor

#endif
