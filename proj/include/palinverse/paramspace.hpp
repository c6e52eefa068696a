// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "palinverse/system.hpp"

namespace palinverse {

// One distinct eigenvalue with its partial multiplicities (Jordan block sizes).
struct JordanGroup {
    Complex eigenvalue;
    std::vector<Index> partial;
    Index size() const;
};

// Palindromic Jordan form: pairs (λ, 1/λ⋆) first, then self-paired values.
struct Pjcf {
    std::vector<std::pair<JordanGroup, JordanGroup>> pairs;
    std::vector<JordanGroup> unpaired;

    Index size() const;
    Matrix matrix() const;
    void validate(SymmetryClass cls, double tol = 1e-8) const;
};

// Groups a list of eigenvalues (semi-simple) into a PJCF. `order` receives the
// permutation: position j of the PJCF holds input eigenvalue order[j].
Pjcf pjcf_from_eigenvalues(const std::vector<Complex>& values, SymmetryClass cls,
                           std::vector<Index>* order = nullptr, double tol = 1e-8);

struct SBasis {
    SymmetryClass cls;
    Matrix t;
    std::vector<Matrix> basis;  // orthonormal in the real inner product Re tr(A*B)
    // Some diagonal block admits only the zero matrix, so every member is singular.
    bool structurally_singular = false;

    Index dim() const { return Index(basis.size()); }
    Matrix combine(const RealVector& c) const;
};

Matrix pascal_matrix(Index m);
// diag(λ^{m−1},…,1)·L·diag(1, −1/λ, …, (−1/λ)^{m−1})
Matrix pascal_scaling(Index m, Complex lambda);
// Upper shift: ones on the superdiagonal.
Matrix nilpotent_shift(Index m);

// Real orthonormal basis of the m×m matrices with S⋆ = −εS.
std::vector<Matrix> star_skew_basis(Index m, SymmetryClass cls);

SBasis s_basis(const Matrix& t, SymmetryClass cls);
SBasis s_basis_pjcf(const Pjcf& jcf, SymmetryClass cls);
// 𝕊_{(X,T)}: adds XSX⋆ = 0.
SBasis s_basis_constrained(const Matrix& x, const Matrix& t, SymmetryClass cls);

Matrix sample_nonsingular(const SBasis& basis, std::mt19937_64& rng, int attempts = 20);
Matrix sample_nonsingular(const SBasis& basis, std::uint64_t seed, int attempts = 20);

struct AffineSolution {
    Matrix particular;
    std::vector<Matrix> homogeneous;
    double residual = 0.0;  // ‖XSX⋆ − C‖_F at the particular solution
};

AffineSolution solve_constrained_S(const SBasis& basis, const Matrix& x, const Matrix& c,
                                   SymmetryClass cls);

// Searches the affine family for a member with σ_min > 1e-8·σ_max.
Matrix sample_nonsingular(const AffineSolution& family, std::mt19937_64& rng, int attempts = 20);

}  // namespace palinverse
