// SPDX-License-Identifier: Apache-2.0
#include "palinverse/system.hpp"

#include "palinverse/error.hpp"

#include <algorithm>

namespace palinverse {

SymmetryClass SymmetryClass::from_code(const std::string& code) {
    if (code == "tp") return {Star::Transpose, 1};
    if (code == "ta") return {Star::Transpose, -1};
    if (code == "hp") return {Star::ConjugateTranspose, 1};
    if (code == "ha") return {Star::ConjugateTranspose, -1};
    throw Error(ErrorCode::InvalidArgument, "unknown class '" + code + "'");
}

std::string SymmetryClass::code() const {
    std::string c = transpose() ? "t" : "h";
    return c + (epsilon == 1 ? "p" : "a");
}

std::string SymmetryClass::name() const {
    std::string s = transpose() ? "T-" : "*-";
    return s + (epsilon == 1 ? "palindromic" : "anti-palindromic");
}

PalindromicSystem::PalindromicSystem(SymmetryClass cls, Matrix a1, Matrix a0, double symmetry_tol)
    : cls_(cls), a1_(std::move(a1)), a0_(std::move(a0)) {
    if (cls_.epsilon != 1 && cls_.epsilon != -1)
        throw Error(ErrorCode::InvalidArgument, "epsilon must be +1 or -1");
    if (a1_.rows() != a1_.cols() || a0_.rows() != a0_.cols() || a1_.rows() != a0_.rows())
        throw Error(ErrorCode::DimensionMismatch, "A1 and A0 must be square of equal order");
    require_finite(a1_, "A1");
    require_finite(a0_, "A0");
    if (symmetry_defect() > symmetry_tol * std::max(a0_.norm(), a1_.norm()))
        throw Error(ErrorCode::SymmetryViolation, "A0 symmetry violation");
    RealVector s = singular_values(a1_);
    if (s.size() == 0) return;
    if (!(s(s.size() - 1) > 1e-12 * s(0)))
        throw Error(ErrorCode::SingularMatrix, "A1 is singular");
    near_singular_ = s(s.size() - 1) <= 1e-8 * s(0);
}

double PalindromicSystem::symmetry_defect() const {
    return (a0_ - double(cls_.epsilon) * palinverse::star(a0_, cls_.star)).norm();
}

StandardPair::StandardPair(Matrix x, Matrix t) : x_(std::move(x)), t_(std::move(t)) {
    if (t_.rows() != t_.cols() || x_.cols() != t_.rows())
        throw Error(ErrorCode::DimensionMismatch, "standard pair shapes");
    require_finite(x_, "X");
    require_finite(t_, "T");
    if (!numerically_nonsingular(t_, 1e-12)) throw Error(ErrorCode::SingularMatrix, "T is singular");
    if (full() && !numerically_nonsingular(w(), 1e-12))
        throw Error(ErrorCode::SingularW, "W = [X; -XT^-1] is singular");
}

Matrix StandardPair::w() const {
    Matrix w(2 * x_.rows(), x_.cols());
    w.topRows(x_.rows()) = x_;
    w.bottomRows(x_.rows()) = -x_ * inverse(t_);
    return w;
}

Matrix eval_q(const PalindromicSystem& sys, Complex lambda) {
    return lambda * lambda * star(sys.a1(), sys.star()) + lambda * sys.a0() +
           double(sys.epsilon()) * sys.a1();
}

double palindromic_identity_check(const PalindromicSystem& sys, Complex lambda) {
    if (lambda == Complex(0.0)) throw Error(ErrorCode::ZeroLambda, "");
    Matrix rhs = double(sys.epsilon()) * lambda * lambda *
                 star(eval_q(sys, 1.0 / star(lambda, sys.star())), sys.star());
    return (eval_q(sys, lambda) - rhs).norm();
}

Matrix pair_residual_matrix(const PalindromicSystem& sys, const Matrix& x, const Matrix& t) {
    if (x.rows() != sys.n() || t.rows() != t.cols() || x.cols() != t.rows())
        throw Error(ErrorCode::DimensionMismatch, "pair_residual");
    Matrix xt = x * t;
    return star(sys.a1(), sys.star()) * xt * t + sys.a0() * xt + double(sys.epsilon()) * sys.a1() * x;
}

double pair_residual(const PalindromicSystem& sys, const Matrix& x, const Matrix& t) {
    Matrix r = pair_residual_matrix(sys, x, t);
    const double a1 = sys.a1().norm(), a0 = sys.a0().norm(), xn = x.norm(), tn = t.norm();
    const double scale = a1 * xn * tn * tn + a0 * xn * tn + a1 * xn;
    if (scale == 0.0) return r.norm();
    return r.norm() / scale;
}

double pair_residual(const PalindromicSystem& sys, const StandardPair& pair) {
    return pair_residual(sys, pair.x(), pair.t());
}

}  // namespace palinverse
