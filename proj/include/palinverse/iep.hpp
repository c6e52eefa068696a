// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "palinverse/structfact.hpp"
#include "palinverse/system.hpp"

namespace palinverse {

struct IepOptions {
    std::uint64_t seed = 0;
    // 2n − k values closed under λ ↦ 1/λ⋆. Drawn at random when absent.
    std::optional<std::vector<Complex>> remaining;
    int attempts = 20;
};

struct IepProblem {
    SymmetryClass cls;
    Index n = 0;
    Matrix x1;  // n × k
    Matrix t1;  // k × k
    IepOptions options;
};

struct IepResult {
    PalindromicSystem system;
    Matrix x;  // [X₁ YΨ]
    Matrix t;  // diag(T₁, T̂₂)
    Matrix s;  // diag(S₁, Ω)
    int attempts = 0;
    double cond_y = 1.0;
};

// All 2n eigenpairs given: samples a nonsingular S in 𝕊_(X,T).
IepResult solve_iep_full(const Matrix& x, const Matrix& t, SymmetryClass cls, std::uint64_t seed,
                         int attempts = 20);

// Ψ (n × r) with ΨΩΨ⋆ = −Δ, for canonical Δ and nonsingular ⋆-skew Ω (r × r).
Matrix solve_psi(const DeltaPattern& delta, const Matrix& omega, std::mt19937_64& rng,
                 int attempts = 20);

IepResult solve_iep_partial(const IepProblem& problem);

// Eigenvalues of T̂₂ in the order used for its construction, plus the matching
// parameter block. Exposed for tests.
struct RemainingSpectrum {
    Matrix t_hat;  // G⁻¹ΛG
    std::vector<Complex> values;
};

RemainingSpectrum build_remaining(const DeltaPattern& omega, const std::vector<Complex>& values,
                                  SymmetryClass cls);

}  // namespace palinverse
