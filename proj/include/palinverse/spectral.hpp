// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "palinverse/system.hpp"

namespace palinverse {

// Symmetry tolerance applied to systems assembled from (X, T, S). Rounding in
// the product A₁XT⁻²SX⋆A₁ leaves a defect well above the input gate of 1e-12.
inline constexpr double kComputedSymmetryTol = 1e-8;

// Defects of S against the three defining conditions of 𝕊_(X,T), each relative:
// ‖S + εS⋆‖/‖S‖, ‖S − TST⋆‖/(‖S‖‖T‖²), ‖XSX⋆‖/(‖X‖²‖S‖).
struct Membership {
    double skew = 0.0;
    double invariance = 0.0;
    double isotropy = 0.0;
    double worst() const;
};

Membership membership(const Matrix& x, const Matrix& t, const Matrix& s, SymmetryClass cls);

// LJ_εL⋆ = [[0, −εA₁], [A₁⋆, 0]]
Matrix companion_form(const PalindromicSystem& sys);

// S = (W⋆LJ_εL⋆W)⁻¹, checked post hoc for membership in 𝕊_(X,T).
Matrix parameter_from_pair(const PalindromicSystem& sys, const StandardPair& pair,
                           double residual_tol = 1e-8, double membership_tol = 1e-10);

// A₁ = ε(XT⁻¹SX⋆)⁻¹, A₀ = −A₁XT⁻²SX⋆A₁.
PalindromicSystem coefficients_from_pair(const Matrix& x, const Matrix& t, const Matrix& s,
                                         SymmetryClass cls, double membership_tol = 1e-9);

}  // namespace palinverse
