// SPDX-License-Identifier: Apache-2.0
#include "palinverse/mup.hpp"

#include <algorithm>
#include <random>

#include "palinverse/error.hpp"
#include "palinverse/forward.hpp"
#include "palinverse/iep.hpp"
#include "palinverse/paramspace.hpp"
#include "palinverse/spectral.hpp"
#include "palinverse/structfact.hpp"

namespace palinverse {

namespace {

bool is_diagonal(const Matrix& t) {
    return (t - Matrix(t.diagonal().asDiagonal())).norm() == 0.0;
}

std::vector<Complex> diagonal_of(const Matrix& t) {
    std::vector<Complex> v;
    for (Index i = 0; i < t.rows(); ++i) v.push_back(t(i, i));
    return v;
}

bool near(Complex a, Complex b) { return std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a)); }

void require_closed(const std::vector<Complex>& v, SymmetryClass cls, const char* what) {
    EigenPairSet e;
    e.cls = cls;
    e.values = v;
    pair_eigenvalues(e, 1e-8);
    if (!e.complete())
        throw Error(ErrorCode::PairingNotClosed, std::string(what) + " is not closed under 1/conj");
}

// Validates the problem and returns the spectrum that must stay in place.
std::vector<Complex> validate(const MupProblem& pb) {
    const Index n = pb.sys.n(), k = pb.t1.rows();
    if (pb.x1.rows() != n || pb.x1.cols() != k || pb.t1.cols() != k || pb.t1_new.rows() != k ||
        pb.t1_new.cols() != k || k < 1 || k > 2 * n)
        throw Error(ErrorCode::DimensionMismatch, "update shapes");
    if (pb.x1_new && (pb.x1_new->rows() != n || pb.x1_new->cols() != k))
        throw Error(ErrorCode::DimensionMismatch, "prescribed eigenvectors");
    if (!is_diagonal(pb.t1) || !is_diagonal(pb.t1_new))
        throw Error(ErrorCode::InvalidArgument, "T1 and the replacement must be diagonal");
    const double res = pair_residual(pb.sys, pb.x1, pb.t1);
    if (res > 1e-8) throw Error(ErrorCode::ResidualTooLarge, "input eigenpairs residual " + std::to_string(res));
    const SymmetryClass cls = pb.sys.cls();
    const std::vector<Complex> old = diagonal_of(pb.t1), fresh = diagonal_of(pb.t1_new);
    require_closed(old, cls, "the replaced spectrum");
    require_closed(fresh, cls, "the replacement spectrum");

    // Remaining spectrum: the full spectrum minus one match per replaced value.
    EigenPairSet all = eig_full(pb.sys);
    std::vector<bool> taken(all.values.size(), false);
    for (Complex z : old) {
        Index best = -1;
        for (Index i = 0; i < all.size(); ++i)
            if (!taken[i] && (best < 0 || std::abs(all.values[i] - z) < std::abs(all.values[best] - z))) best = i;
        if (best >= 0) taken[best] = true;
    }
    std::vector<Complex> kept;
    for (Index i = 0; i < all.size(); ++i)
        if (!taken[i]) kept.push_back(all.values[i]);
    for (Complex z : old)
        for (Complex w : kept)
            if (near(z, w)) throw Error(ErrorCode::SpectraOverlap, "replaced eigenvalue is also kept");
    for (Complex z : fresh) {
        for (Complex w : kept)
            if (near(z, w)) throw Error(ErrorCode::SpectraOverlap, "replacement meets the kept spectrum");
        for (Complex w : old)
            if (near(z, w)) throw Error(ErrorCode::SpectraOverlap, "replacement meets the replaced spectrum");
    }
    return kept;
}

}  // namespace

Matrix compute_S1(const PalindromicSystem& sys, const Matrix& x1, const Matrix& t1) {
    const SymmetryClass cls = sys.cls();
    const double eps = double(cls.epsilon);
    const Matrix xs = star(x1, cls.star);
    const Matrix inner = eps * xs * sys.a1() * x1 * inverse(t1) -
                         star(inverse(t1), cls.star) * xs * star(sys.a1(), cls.star) * x1;
    if (!numerically_nonsingular(inner, 1e-12))
        throw Error(ErrorCode::SingularS1Precursor, "the matrix defining S1 is singular");
    Matrix s1 = inverse(inner);
    s1 = 0.5 * (s1 - eps * star(s1, cls.star));
    const double inv = (s1 - t1 * s1 * star(t1, cls.star)).norm();
    if (inv > 1e-9 * s1.norm() * std::max(1.0, t1.squaredNorm()))
        throw Error(ErrorCode::MembershipViolation, "S1 is not invariant under T1");
    return s1;
}

MupResult apply_update(const PalindromicSystem& sys, const Matrix& x1, const Matrix& t1, const Matrix& s1,
                       const Matrix& x1_new, const Matrix& t1_new, const Matrix& s1_new) {
    const SymmetryClass cls = sys.cls();
    const double eps = double(cls.epsilon);
    const Index n = sys.n();
    const Matrix ti = inverse(t1), tni = inverse(t1_new);
    const Matrix xs = star(x1, cls.star), xns = star(x1_new, cls.star);
    const Matrix old1 = x1 * ti * s1 * xs, new1 = x1_new * tni * s1_new * xns;
    const double term = std::max(norm2(old1), norm2(new1));
    RankFactorization rf = rank_factorize(new1 - old1, cls.star, 1e-10 * term);
    const Matrix& a1 = sys.a1();
    const Matrix xi = Matrix::Identity(rf.rank, rf.rank) + eps * star(rf.z2, cls.star) * a1 * rf.z1;
    if (!numerically_nonsingular(xi, 1e-12)) throw Error(ErrorCode::SingularMatrix, "Xi is singular");
    const Matrix ups = x1_new * tni * tni * s1_new * xns - x1 * ti * ti * s1 * xs;
    const Matrix xiz = linear_solve(xi, star(rf.z2, cls.star));  // Ξ⁻¹Z₂⋆
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a1_new = a1 - eps * a1 * rf.z1 * xiz * a1;
    const Matrix a0_new = (id - eps * a1 * rf.z1 * xiz) * (sys.a0() - a1 * ups * a1) * (id - eps * rf.z1 * xiz * a1);

    MupResult out{PalindromicSystem(cls, a1_new, a0_new, kComputedSymmetryTol), x1_new, s1, s1_new, rf.z1, rf.z2};
    out.rank = rf.rank;
    out.smw_residual =
        (a1_new * (inverse(a1) + eps * rf.z1 * star(rf.z2, cls.star)) - id).norm();
    const Matrix c = x1 * s1 * xs;
    const double cn = c.norm();
    out.constraint_residual = (x1_new * s1_new * xns - c).norm() / (cn > 0 ? cn : 1.0);
    return out;
}

MupResult update_model(const MupProblem& pb) {
    validate(pb);
    const SymmetryClass cls = pb.sys.cls();
    const Matrix s1 = compute_S1(pb.sys, pb.x1, pb.t1);
    const StarFactorization fy = star_factorize(pb.x1 * s1 * star(pb.x1, cls.star), cls);
    const SBasis basis = s_basis(pb.t1_new, cls);
    std::mt19937_64 rng(pb.seed);
    std::string last = "no attempt made";
    for (int a = 1; a <= pb.attempts; ++a) {
        try {
            const Matrix s1_new = sample_nonsingular(basis, rng, 1);
            const StarFactorization ft = star_factorize(s1_new, cls);
            // ΨΔ̃Ψ⋆ = Δ is ΨΩΨ⋆ = −Δ with Ω = −Δ̃.
            const Matrix psi = solve_psi(fy.delta, -ft.delta.matrix(), rng, 1);
            const Matrix x1_new = fy.y * linear_solve(ft.y.transpose(), psi.transpose()).transpose();
            MupResult r = apply_update(pb.sys, pb.x1, pb.t1, s1, x1_new, pb.t1_new, s1_new);
            r.attempts = a;
            return r;
        } catch (const Error& e) {
            last = std::string(error_name(e.code())) + ": " + e.detail();
        }
    }
    throw Error(ErrorCode::XiSingularRetryExhausted,
                std::to_string(pb.attempts) + " attempts failed; last: " + last);
}

MupResult update_model_prescribed(const MupProblem& pb) {
    if (!pb.x1_new) throw Error(ErrorCode::InvalidArgument, "prescribed eigenvectors missing");
    validate(pb);
    const SymmetryClass cls = pb.sys.cls();
    const Matrix s1 = compute_S1(pb.sys, pb.x1, pb.t1);
    const Matrix c = pb.x1 * s1 * star(pb.x1, cls.star);
    const AffineSolution family = solve_constrained_S(s_basis(pb.t1_new, cls), *pb.x1_new, c, cls);
    std::mt19937_64 rng(pb.seed);
    std::string last = "no attempt made";
    const double scale = family.particular.norm() > 0 ? family.particular.norm() : 1.0;
    for (int a = 1; a <= pb.attempts; ++a) {
        // First the least-squares solution, then random points of the affine family.
        Matrix s1_new = family.particular;
        if (a > 1) {
            if (family.homogeneous.empty()) break;
            RealVector g = random_normal(Index(family.homogeneous.size()), rng);
            for (size_t i = 0; i < family.homogeneous.size(); ++i)
                s1_new += scale * g(Index(i)) * family.homogeneous[i];
        }
        if (!numerically_nonsingular(s1_new, 1e-8)) {
            last = "singular S1 tilde";
            continue;
        }
        try {
            MupResult r = apply_update(pb.sys, pb.x1, pb.t1, s1, *pb.x1_new, pb.t1_new, s1_new);
            r.attempts = a;
            return r;
        } catch (const Error& e) {
            last = std::string(error_name(e.code())) + ": " + e.detail();
        }
    }
    if (last == "singular S1 tilde")
        throw Error(ErrorCode::NoNonsingularS1tilde, "every sampled solution of the constraint was singular");
    throw Error(ErrorCode::XiSingularRetryExhausted,
                std::to_string(pb.attempts) + " attempts failed; last: " + last);
}

}  // namespace palinverse
