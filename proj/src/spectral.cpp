// SPDX-License-Identifier: Apache-2.0
#include "palinverse/spectral.hpp"

#include <algorithm>

#include "palinverse/error.hpp"

namespace palinverse {

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : num; }

}  // namespace

double Membership::worst() const { return std::max({skew, invariance, isotropy}); }

Membership membership(const Matrix& x, const Matrix& t, const Matrix& s, SymmetryClass cls) {
    const double eps = double(cls.epsilon);
    const double sn = s.norm(), tn = t.norm(), xn = x.norm();
    Membership m;
    m.skew = ratio((s + eps * star(s, cls.star)).norm(), sn);
    m.invariance = ratio((s - t * s * star(t, cls.star)).norm(), sn * tn * tn);
    m.isotropy = ratio((x * s * star(x, cls.star)).norm(), xn * xn * sn);
    return m;
}

Matrix companion_form(const PalindromicSystem& sys) {
    const Index n = sys.n();
    Matrix k = Matrix::Zero(2 * n, 2 * n);
    k.topRightCorner(n, n) = -double(sys.epsilon()) * sys.a1();
    k.bottomLeftCorner(n, n) = star(sys.a1(), sys.star());
    return k;
}

Matrix parameter_from_pair(const PalindromicSystem& sys, const StandardPair& pair, double residual_tol,
                           double membership_tol) {
    if (!pair.full() || pair.n() != sys.n())
        throw Error(ErrorCode::DimensionMismatch, "parameter_from_pair needs a full standard pair");
    const double res = pair_residual(sys, pair);
    if (res > residual_tol)
        throw Error(ErrorCode::ResidualTooLarge, "pair residual " + std::to_string(res));
    const Matrix w = pair.w();
    if (!numerically_nonsingular(w, 1e-12)) throw Error(ErrorCode::SingularW, "");
    const SymmetryClass cls = sys.cls();
    Matrix s = inverse(star(w, cls.star) * companion_form(sys) * w);
    // The inverse of an exactly ⋆-skew matrix is ⋆-skew; remove the rounding.
    s = 0.5 * (s - double(cls.epsilon) * star(s, cls.star));
    Membership m = membership(pair.x(), pair.t(), s, cls);
    if (m.worst() > membership_tol)
        throw Error(ErrorCode::MembershipViolation,
                    "S misses the parameter space by " + std::to_string(m.worst()));
    return s;
}

PalindromicSystem coefficients_from_pair(const Matrix& x, const Matrix& t, const Matrix& s,
                                         SymmetryClass cls, double membership_tol) {
    const Index m = t.rows();
    if (t.cols() != m || x.cols() != m || s.rows() != m || s.cols() != m)
        throw Error(ErrorCode::DimensionMismatch, "coefficients_from_pair");
    require_finite(x, "X");
    require_finite(t, "T");
    require_finite(s, "S");
    if (!numerically_nonsingular(s, 1e-12)) throw Error(ErrorCode::SingularMatrix, "S is singular");
    Membership mem = membership(x, t, s, cls);
    if (mem.worst() > membership_tol)
        throw Error(ErrorCode::MembershipViolation,
                    "S misses the parameter space by " + std::to_string(mem.worst()));
    const double eps = double(cls.epsilon);
    const Matrix tinv = inverse(t);
    const Matrix sx = s * star(x, cls.star);
    const Matrix lead = x * tinv * sx;
    if (!numerically_nonsingular(lead, 1e-12))
        throw Error(ErrorCode::SingularLeadingBlock, "X T^-1 S X* is singular");
    const Matrix a1 = eps * inverse(lead);
    const Matrix a0 = -a1 * x * tinv * tinv * sx * a1;
    return PalindromicSystem(cls, a1, a0, kComputedSymmetryTol);
}

}  // namespace palinverse
