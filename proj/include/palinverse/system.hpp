// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "palinverse/numerics.hpp"

namespace palinverse {

struct SymmetryClass {
    Star star = Star::Transpose;
    int epsilon = 1;

    // "tp", "ta", "hp", "ha"
    static SymmetryClass from_code(const std::string& code);
    std::string code() const;
    std::string name() const;
    bool transpose() const { return star == Star::Transpose; }
    bool operator==(const SymmetryClass&) const = default;
};

inline constexpr double kSymmetryTol = 1e-12;

// Q(λ) = λ²A₁⋆ + λA₀ + εA₁.
class PalindromicSystem {
public:
    // Validates A₀⋆ = εA₀ to symmetry_tol·max(‖A₀‖_F, ‖A₁‖_F) and that A₁ is nonsingular.
    PalindromicSystem(SymmetryClass cls, Matrix a1, Matrix a0, double symmetry_tol = kSymmetryTol);

    const SymmetryClass& cls() const { return cls_; }
    Index n() const { return a1_.rows(); }
    const Matrix& a1() const { return a1_; }
    const Matrix& a0() const { return a0_; }
    int epsilon() const { return cls_.epsilon; }
    Star star() const { return cls_.star; }

    // σ_min/σ_max of A₁ fell in [1e-12, 1e-8].
    bool near_singular_leading() const { return near_singular_; }

    // ‖A₀ − εA₀⋆‖_F
    double symmetry_defect() const;

private:
    SymmetryClass cls_;
    Matrix a1_;
    Matrix a0_;
    bool near_singular_ = false;
};

class StandardPair {
public:
    StandardPair(Matrix x, Matrix t);

    const Matrix& x() const { return x_; }
    const Matrix& t() const { return t_; }
    Index n() const { return x_.rows(); }
    Index m() const { return t_.rows(); }
    bool full() const { return t_.rows() == 2 * x_.rows(); }
    // [X; −XT⁻¹]
    Matrix w() const;

private:
    Matrix x_;
    Matrix t_;
};

Matrix eval_q(const PalindromicSystem& sys, Complex lambda);

// ‖Q(λ) − ελ²Q(1/λ⋆)⋆‖_F; for ⋆=∗ the polynomial adjoint conjugates the argument too.
double palindromic_identity_check(const PalindromicSystem& sys, Complex lambda);

// A₁⋆XT² + A₀XT + εA₁X
Matrix pair_residual_matrix(const PalindromicSystem& sys, const Matrix& x, const Matrix& t);

// Frobenius residual normalized by ‖A₁‖‖X‖‖T‖² + ‖A₀‖‖X‖‖T‖ + ‖A₁‖‖X‖.
double pair_residual(const PalindromicSystem& sys, const StandardPair& pair);
double pair_residual(const PalindromicSystem& sys, const Matrix& x, const Matrix& t);

}  // namespace palinverse
