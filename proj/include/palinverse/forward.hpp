// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "palinverse/system.hpp"

namespace palinverse {

// Pencil λM1 + M0 with M1 = [[A₁⋆, 0], [0, I]], M0 = [[A₀, εA₁], [−I, 0]].
struct Linearization {
    Matrix m0;
    Matrix m1;
};

Linearization linearize(const PalindromicSystem& sys);

struct EigenPairSet {
    SymmetryClass cls;
    std::vector<Complex> values;
    Matrix vectors;  // n × 2n, unit columns
    // ‖Q(λ)v‖₂ / (‖A₁‖(1+|λ|²) + ‖A₀‖|λ|)
    std::vector<double> residuals;
    // Condition number of each eigenvalue of the companion matrix.
    std::vector<double> conditions;
    // (i, j) with λ_j ≈ 1/λ_i⋆; self-paired values appear as (i, i).
    std::vector<std::pair<Index, Index>> pairs;
    std::vector<Index> unmatched;

    Index size() const { return Index(values.size()); }
    bool complete() const { return unmatched.empty(); }
    // Partner index, or −1 when unmatched.
    Index partner(Index i) const;
    // Throws PairingFailure naming the first unmatched value.
    void require_complete() const;
};

inline constexpr double kPairingTol = 1e-6;

// All 2n eigenpairs from the companion pencil, grouped into (λ, 1/λ⋆) pairs.
// Pairing failures are recorded in `unmatched`, never thrown.
EigenPairSet eig_full(const PalindromicSystem& sys, double pairing_tol = kPairingTol);

// Greedy matching on a bare list of values; used by eig_full.
void pair_eigenvalues(EigenPairSet& eigs, double pairing_tol);

struct PairSelection {
    Matrix x1, t1;  // selected, T1 diagonal
    Matrix x2, t2;  // the rest
    std::vector<Index> selected;
    std::vector<Index> remaining;
};

// Each target picks the nearest unused eigenvalue within tol·max(1,|target|).
PairSelection select_pairs(const EigenPairSet& eigs, const std::vector<Complex>& targets,
                           double tol = 1e-3);

}  // namespace palinverse
