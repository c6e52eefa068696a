// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "palinverse/system.hpp"

namespace palinverse {

struct MupProblem {
    PalindromicSystem sys;
    Matrix x1;      // eigenvectors to replace, n × k
    Matrix t1;      // their eigenvalues, diagonal k × k
    Matrix t1_new;  // replacement eigenvalues, diagonal k × k
    std::optional<Matrix> x1_new;  // prescribed replacement eigenvectors
    std::uint64_t seed = 0;
    int attempts = 20;
};

struct MupResult {
    PalindromicSystem system;
    Matrix x1_new;
    Matrix s1;
    Matrix s1_new;
    Matrix z1, z2;
    Index rank = 0;  // ℓ
    int attempts = 0;
    // ‖Ã₁(A₁⁻¹ + εZ₁Z₂⋆) − I‖_F
    double smw_residual = 0.0;
    // ‖X̃₁S̃₁X̃₁⋆ − X₁S₁X₁⋆‖_F / ‖X₁S₁X₁⋆‖_F
    double constraint_residual = 0.0;
};

// S₁ = (εX₁⋆A₁X₁T₁⁻¹ − T₁⁻⋆X₁⋆A₁⋆X₁)⁻¹
Matrix compute_S1(const PalindromicSystem& sys, const Matrix& x1, const Matrix& t1);

// The low-rank update for given (X̃₁, T̃₁, S̃₁); throws SingularMatrix when Ξ is
// numerically singular.
MupResult apply_update(const PalindromicSystem& sys, const Matrix& x1, const Matrix& t1, const Matrix& s1,
                       const Matrix& x1_new, const Matrix& t1_new, const Matrix& s1_new);

MupResult update_model(const MupProblem& problem);
MupResult update_model_prescribed(const MupProblem& problem);

}  // namespace palinverse
