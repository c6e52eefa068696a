// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "palinverse/system.hpp"

namespace palinverse {

// Real dimension of 𝕊_(X,T). Transpose classes are complex-linear, so their
// dimension is always even.
Index s_space_dimension(const Matrix& x, const Matrix& t, SymmetryClass cls);

// Multiplicity pattern of λ(S̃S⁻¹): each part is one value μ together with μ⋆.
struct ZetaPartition {
    std::vector<Index> parts;
    std::vector<bool> self_paired;  // μ = μ⋆
    std::vector<Complex> mu;

    Index cardinality() const { return Index(parts.size()); }
    Index total() const;
};

ZetaPartition zeta_partition(const Matrix& s, const Matrix& s_tilde, SymmetryClass cls, double tol = 1e-7);

struct JointBlockDiagonalization {
    ZetaPartition zeta;
    Matrix k;                     // n × n, columns grouped by part
    std::vector<Index> pi;        // columns of (X, J) listed part by part
    std::vector<Index> sizes;     // n_i
    std::vector<PalindromicSystem> blocks;  // K⋆Q̂K split by part
    double off_block = 0.0;       // relative mass outside the blocks of K⋆Â₁K, K⋆Â₀K
};

// K with K⋆Q̂(λ)K block diagonal for the system built from (X, J, Ŝ). K depends
// only on (X, J, S, S̃).
JointBlockDiagonalization joint_block_diagonalize(const Matrix& x, const Matrix& j, const Matrix& s,
                                                  const Matrix& s_tilde, const Matrix& s_hat,
                                                  SymmetryClass cls, double tol = 1e-7);

// ‖M − blockdiag(M)‖_F / ‖M‖_F for consecutive diagonal blocks of the given sizes.
double off_block_mass(const Matrix& m, const std::vector<Index>& sizes);

}  // namespace palinverse
