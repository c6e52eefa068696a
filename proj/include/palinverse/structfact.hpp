// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "palinverse/system.hpp"

namespace palinverse {

struct Inertia {
    Index p = 0;  // positive
    Index q = 0;  // negative
    Index z = 0;  // zero
};

// Counts use τ = 1e-10·‖H‖₂.
Inertia inertia(const Matrix& h);

// Canonical Δ of B = YΔY⋆.
//   (∗,+1): diag(iI_q, −iI_p, 0)     (∗,−1): diag(I_p, −I_q, 0)
//   (⊤,+1): diag([[0,I_{t/2}],[−I_{t/2},0]], 0)     (⊤,−1): diag(I_t, 0)
struct DeltaPattern {
    SymmetryClass cls;
    Index p = 0;
    Index q = 0;
    Index t = 0;
    Index size = 0;

    Index rank() const { return cls.transpose() ? t : p + q; }
    Matrix matrix() const;
    bool operator==(const DeltaPattern&) const = default;
};

DeltaPattern make_delta(SymmetryClass cls, Index p, Index q, Index t, Index size);
Matrix build_delta(SymmetryClass cls, Index p, Index q, Index t, Index size);

struct StarFactorization {
    Matrix y;  // square, nonsingular
    DeltaPattern delta;
    double cond_y = 1.0;
};

// B = YΔY⋆ for B⋆ = −εB.
StarFactorization star_factorize(const Matrix& b, SymmetryClass cls);

}  // namespace palinverse
