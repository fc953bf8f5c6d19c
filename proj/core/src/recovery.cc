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

// Heuristic adversary: searches the structural parameters of an incoherent
// channel family for the best recovery of a target state.

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "qcensor/censorship.h"
#include "qcensor/error.h"

namespace qcensor {

namespace {

constexpr int kBranches = 2;
constexpr double kInitialStep = 0.5;
constexpr double kMinStep = 1e-7;
// Smaller score gains are treated as roundoff and rejected.
constexpr double kMinGain = 1e-14;

// One candidate channel: a list of IO blocks whose meaning depends on the
// family.
//   IO:      blocks[0] acts on the joint space.
//   LocalIO: blocks[s] acts on site s.
//   SIO:     a one-way tree; level s holds kBranches^s blocks for site s and
//            every level but the last splits its Kraus operators into
//            kBranches outcome groups (operator a -> group a mod kBranches).
struct Candidate {
    std::vector<IoStructure> blocks;
};

class Layout {
  public:
    Layout(Family family, Dims site_dims) : family_(family), site_dims_(std::move(site_dims)) {
    }

    std::size_t num_blocks() const {
        switch (family_) {
            case Family::IO: return 1;
            case Family::LocalIO: return site_dims_.size();
            case Family::SIO: {
                std::size_t total = 0;
                std::size_t level = 1;
                for (std::size_t s = 0; s < site_dims_.size(); ++s) {
                    total += level;
                    level *= kBranches;
                }
                return total;
            }
        }
        return 0;
    }

    int block_dim(std::size_t block) const {
        if (family_ == Family::IO) {
            return static_cast<int>(total_dim(site_dims_));
        }
        return site_dims_[block_site(block)];
    }

    // Minimum Kraus count so every outcome group of a splitting block is
    // nonempty.
    int min_kraus(std::size_t block) const {
        if (family_ == Family::SIO && block_site(block) + 1 < site_dims_.size()) {
            return kBranches;
        }
        return 1;
    }

    std::size_t block_site(std::size_t block) const {
        if (family_ != Family::SIO) {
            return block;
        }
        std::size_t level = 1;
        for (std::size_t s = 0; s < site_dims_.size(); ++s) {
            if (block < level) {
                return s;
            }
            block -= level;
            level *= kBranches;
        }
        return site_dims_.size() - 1;
    }

    Family family() const {
        return family_;
    }
    const Dims &site_dims() const {
        return site_dims_;
    }

    // Terms of the SIO tree as per-site Kraus lists.
    std::vector<std::vector<std::vector<ComplexMatrix>>> sio_terms(const Candidate &c) const {
        const std::size_t n = site_dims_.size();
        std::vector<std::vector<std::vector<ComplexMatrix>>> terms;
        std::size_t leaves = 1;
        for (std::size_t s = 0; s + 1 < n; ++s) {
            leaves *= kBranches;
        }
        for (std::size_t path = 0; path < leaves; ++path) {
            std::vector<std::vector<ComplexMatrix>> factors(n);
            std::size_t offset = 0;
            std::size_t level = 1;
            std::size_t prefix = 0;
            for (std::size_t s = 0; s < n; ++s) {
                const IoStructure &blk = c.blocks[offset + prefix];
                auto ops = blk.kraus_matrices();
                if (s + 1 < n) {
                    // Outcome digit for this level, most significant first.
                    std::size_t divisor = 1;
                    for (std::size_t t = s + 2; t < n; ++t) {
                        divisor *= kBranches;
                    }
                    const std::size_t g = (path / divisor) % kBranches;
                    for (std::size_t a = g; a < ops.size(); a += kBranches) {
                        factors[s].push_back(std::move(ops[a]));
                    }
                    prefix = prefix * kBranches + g;
                } else {
                    factors[s] = std::move(ops);
                }
                if (factors[s].empty()) {
                    factors[s].push_back(ComplexMatrix::Zero(site_dims_[s], site_dims_[s]));
                }
                offset += level;
                level *= kBranches;
            }
            terms.push_back(std::move(factors));
        }
        return terms;
    }

    ComplexMatrix act(const Candidate &c, const ComplexMatrix &rho) const {
        switch (family_) {
            case Family::IO: {
                ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
                for (const auto &m : c.blocks[0].kraus_matrices()) {
                    out.noalias() += m * rho * m.adjoint();
                }
                return out;
            }
            case Family::LocalIO: {
                ComplexMatrix x = rho;
                for (std::size_t s = 0; s < site_dims_.size(); ++s) {
                    x = conjugate_on_site(c.blocks[s].kraus_matrices(), x, site_dims_, static_cast<int>(s));
                }
                return x;
            }
            case Family::SIO: {
                ComplexMatrix acc = ComplexMatrix::Zero(rho.rows(), rho.cols());
                for (const auto &term : sio_terms(c)) {
                    ComplexMatrix x = rho;
                    for (std::size_t s = 0; s < term.size(); ++s) {
                        x = conjugate_on_site(term[s], x, site_dims_, static_cast<int>(s));
                    }
                    acc += x;
                }
                return acc;
            }
        }
        return rho;
    }

  private:
    Family family_;
    Dims site_dims_;
};

IoStructure identity_block(int dim, int n_kraus) {
    IoStructure s;
    s.dim_in = dim;
    s.dim_out = dim;
    for (int a = 0; a < n_kraus; ++a) {
        std::vector<int> f(static_cast<std::size_t>(dim));
        std::iota(f.begin(), f.end(), 0);
        s.column_map.push_back(std::move(f));
        s.coeff.emplace_back(static_cast<std::size_t>(dim), Complex(a == 0 ? 1.0 : 0.0, 0.0));
    }
    return s;
}

IoStructure random_block(int dim, int n_kraus, std::mt19937_64 &rng) {
    // sample_random_io already redraws column maps until a completion exists.
    return sample_random_io(dim, n_kraus, rng()).structure();
}

class Objectiver {
  public:
    Objectiver(const DensityOperator &target, Objective objective)
        : target_(target.matrix()), root_(psd_sqrt(target.matrix())), objective_(objective) {
    }

    // Larger is better.
    double score(const ComplexMatrix &out) const {
        if (objective_ == Objective::Fidelity) {
            return fidelity_of(out);
        }
        return -distance_of(out);
    }

    double fidelity_of(const ComplexMatrix &out) const {
        const ComplexMatrix inner = root_ * out * root_;
        const double s = psd_sqrt_trace(inner);
        return std::clamp(s * s, 0.0, 1.0);
    }

    double distance_of(const ComplexMatrix &out) const {
        return std::clamp(0.5 * hermitian_eigenvalues(out - target_).cwiseAbs().sum(), 0.0, 1.0);
    }

  private:
    ComplexMatrix target_;
    ComplexMatrix root_;
    Objective objective_;
};

struct RestartOutcome {
    Candidate candidate;
    double score;
};

RestartOutcome run_restart(const Layout &layout, const ComplexMatrix &censored, const Objectiver &obj,
                           const RecoverySearchBudget &budget, int restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(budget.seed & 0xffffffffu), static_cast<std::uint32_t>(budget.seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);

    Candidate cand;
    for (std::size_t b = 0; b < layout.num_blocks(); ++b) {
        const int dim = layout.block_dim(b);
        const int lo = std::min(layout.min_kraus(b), budget.n_kraus_max);
        const int k_min = std::max(lo, 1);
        if (restart == 0) {
            cand.blocks.push_back(identity_block(dim, std::max(budget.n_kraus_max, k_min)));
        } else {
            std::uniform_int_distribution<int> pick_k(k_min, std::max(budget.n_kraus_max, k_min));
            cand.blocks.push_back(random_block(dim, pick_k(rng), rng));
        }
    }
    double best = obj.score(layout.act(cand, censored));

    double step = kInitialStep;
    for (int iter = 0; iter < budget.max_iterations && step >= kMinStep; ++iter) {
        bool improved = false;
        for (std::size_t b = 0; b < cand.blocks.size(); ++b) {
            const IoStructure &blk = cand.blocks[b];
            for (std::size_t a = 0; a < blk.num_kraus(); ++a) {
                for (int col = 0; col < blk.dim_in; ++col) {
                    const double re = normal(rng);
                    const double im = normal(rng);
                    IoStructure trial = cand.blocks[b];
                    trial.coeff[a][static_cast<std::size_t>(col)] += step * Complex(re, im) / std::sqrt(2.0);
                    if (!trial.enforce_completeness()) {
                        continue;
                    }
                    std::swap(cand.blocks[b], trial);
                    const double s = obj.score(layout.act(cand, censored));
                    if (s > best + kMinGain) {
                        best = s;
                        improved = true;
                    } else {
                        std::swap(cand.blocks[b], trial);
                    }
                }
            }
        }
        if (!improved) {
            step *= 0.5;
        }
    }
    return RestartOutcome{std::move(cand), best};
}

}  // namespace

RecoveryResult recovery_search(const DensityOperator &censored, const DensityOperator &target, Family family,
                               const RecoverySearchBudget &budget, Objective objective) {
    budget.check();
    if (censored.dims() != target.dims()) {
        throw Error(ErrorCode::DimensionMismatch, "censored and target dims differ");
    }
    Dims site_dims = censored.dims();
    if (site_dims.empty()) {
        throw Error(ErrorCode::InvalidArgument, "recovery on the trivial system");
    }
    const Layout layout(family, site_dims);
    const Objectiver obj(target, objective);

    std::optional<RestartOutcome> best;
    int best_restart = 0;
    for (int r = 0; r < budget.n_restarts; ++r) {
        RestartOutcome out = run_restart(layout, censored.matrix(), obj, budget, r);
        if (!best || out.score > best->score) {
            best = std::move(out);
            best_restart = r;
        }
    }

    const Candidate &c = best->candidate;
    std::optional<SioChannel> sio;
    std::optional<KrausChannel> global;
    switch (family) {
        case Family::IO:
            global.emplace(site_dims, site_dims, c.blocks[0].kraus_matrices());
            break;
        case Family::LocalIO: {
            SioTerm term;
            for (std::size_t s = 0; s < site_dims.size(); ++s) {
                term.factors.emplace_back(Dims{site_dims[s]}, Dims{site_dims[s]}, c.blocks[s].kraus_matrices());
            }
            sio = build_sio({std::move(term)}, Tolerances{1e-10, 1e-9, 1e-9, 1e-9});
            global.emplace(sio->to_kraus());
            break;
        }
        case Family::SIO: {
            std::vector<SioTerm> terms;
            int label = 0;
            for (auto &factors : layout.sio_terms(c)) {
                SioTerm term;
                term.label = label++;
                for (std::size_t s = 0; s < factors.size(); ++s) {
                    term.factors.emplace_back(Dims{site_dims[s]}, Dims{site_dims[s]}, std::move(factors[s]),
                                              s + 1 < factors.size() ? TpMode::TraceNonIncreasing
                                                                     : TpMode::TracePreserving);
                }
                terms.push_back(std::move(term));
            }
            sio = build_sio(std::move(terms), Tolerances{1e-10, 1e-9, 1e-9, 1e-9});
            global.emplace(sio->to_kraus());
            break;
        }
    }

    const DensityOperator output = apply(*global, censored);
    const double f = fidelity(output, target);
    const double d = trace_distance(output, target);
    return RecoveryResult{family, std::move(*global), std::move(sio), output, f, d, best_restart};
}

}  // namespace qcensor
