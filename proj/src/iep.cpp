// SPDX-License-Identifier: Apache-2.0
#include "palinverse/iep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "palinverse/error.hpp"
#include "palinverse/forward.hpp"
#include "palinverse/paramspace.hpp"
#include "palinverse/spectral.hpp"

namespace palinverse {

namespace {

constexpr double kPairTol = 1e-8;

Complex sqrt_minus_eps(int eps) { return eps == 1 ? Complex(0, 1) : Complex(1, 0); }

bool collides(Complex z, const std::vector<Complex>& others) {
    for (Complex w : others)
        if (std::abs(z - w) <= kPairTol * std::max(1.0, std::abs(w))) return true;
    return false;
}

std::vector<Complex> spectrum(const Matrix& t) {
    EigenDecomposition ed = dense_eig(t);
    return std::vector<Complex>(ed.values.data(), ed.values.data() + ed.values.size());
}

// Groups values into (λ, 1/λ⋆) pairs and self-paired singletons.
EigenPairSet pairing_of(const std::vector<Complex>& values, SymmetryClass cls) {
    EigenPairSet e;
    e.cls = cls;
    e.values = values;
    pair_eigenvalues(e, kPairTol);
    return e;
}

// Isotropic vectors e_a + c·e_b built from leftover columns of Δ_B.
void fill_zero_rows(Matrix& phi, Index first_zero_row, const std::vector<Vector>& iso,
                    std::mt19937_64& rng) {
    if (iso.empty()) return;
    const Index rows = phi.rows() - first_zero_row;
    Matrix coef = random_complex(rows, Index(iso.size()), rng);
    for (Index i = 0; i < rows; ++i)
        for (size_t j = 0; j < iso.size(); ++j)
            phi.row(first_zero_row + i) += coef(i, Index(j)) * iso[j].transpose();
}

// Φ with ΦΔ_BΦ⋆ = −Δ, or nullopt when the counts do not fit.
std::optional<Matrix> canonical_phi(const DeltaPattern& d, const DeltaPattern& db, std::mt19937_64& rng) {
    const Index n = d.size, r = db.size;
    const SymmetryClass cls = d.cls;
    Matrix phi = Matrix::Zero(n, r);
    std::vector<Vector> iso;
    auto unit = [r](Index i, Complex v = 1.0) {
        Vector e = Vector::Zero(r);
        e(i) = v;
        return e;
    };
    if (!cls.transpose()) {
        // Both patterns are diag(c·I_a, −c·I_b, 0); map each sign block of Δ
        // onto the opposite block of Δ_B.
        const bool plus = cls.epsilon == 1;
        const Index a = plus ? db.q : db.p, b = plus ? db.p : db.q;
        const Index a2 = plus ? d.q : d.p, b2 = plus ? d.p : d.q;
        if (a2 > b || b2 > a) return std::nullopt;
        for (Index j = 0; j < a2; ++j) phi(j, a + j) = 1.0;
        for (Index j = 0; j < b2; ++j) phi(a2 + j, j) = 1.0;
        const Index left_first = a - b2, left_second = b - a2;
        for (Index j = 0; j < std::min(left_first, left_second); ++j)
            iso.push_back(unit(b2 + j) + unit(a + a2 + j));
    } else if (cls.epsilon == -1) {
        if (d.t > r) return std::nullopt;
        const Complex I(0, 1);
        for (Index j = 0; j < d.t; ++j) phi(j, j) = I;
        for (Index j = d.t; j + 1 < r; j += 2) iso.push_back(unit(j) + unit(j + 1, I));
    } else {
        const Index h = r / 2, h2 = d.t / 2;
        if (h2 > h) return std::nullopt;
        for (Index j = 0; j < h2; ++j) {
            phi(j, h + j) = 1.0;
            phi(h2 + j, j) = 1.0;
        }
        for (Index j = h2; j < h; ++j) iso.push_back(unit(j));
    }
    fill_zero_rows(phi, d.rank(), iso, rng);
    return phi;
}

void check_star_skew(const Matrix& m, SymmetryClass cls, const char* what) {
    if ((star(m, cls.star) + double(cls.epsilon) * m).norm() > 1e-10 * m.norm())
        throw Error(ErrorCode::SymmetryViolation, std::string(what) + " must satisfy M⋆ = −εM");
}

Index count_near(const std::vector<Complex>& values, Complex z) {
    return Index(std::count_if(values.begin(), values.end(), [&](Complex v) { return collides(v, {z}); }));
}

// For (⊤,−1), Q(±1) is skew of order n, so ±1 occur with multiplicity ≡ n (mod 2).
// Returns how many of +1 and −1 the remaining spectrum must supply.
std::pair<Index, Index> ta_unit_singletons(Index n, const std::vector<Complex>& lam1) {
    const Index c1 = count_near(lam1, 1.0), cm1 = count_near(lam1, -1.0);
    const Index s1 = (n - c1) % 2 != 0 ? 1 : 0, sm1 = (n - cm1) % 2 != 0 ? 1 : 0;
    if ((s1 && c1 > 0) || (sm1 && cm1 > 0))
        throw Error(ErrorCode::Infeasible,
                    "parity: +1 and -1 need multiplicity of the same parity as n, which T1 leaves unmet");
    return {s1, sm1};
}

// Seeded pairs r·e^{iθ}, r ∈ [0.3, 0.7], and unimodular singletons, avoiding `avoid`.
std::vector<Complex> default_remaining(const DeltaPattern& omega, Index n, const std::vector<Complex>& avoid,
                                       std::mt19937_64& rng) {
    const SymmetryClass cls = omega.cls;
    std::uniform_real_distribution<double> rad(0.3, 0.7), ang(0.0, 2.0 * std::numbers::pi);
    std::vector<Complex> out;
    Index pairs = 0, singles = 0;
    if (!cls.transpose()) {
        pairs = std::min(omega.p, omega.q);
        singles = std::max(omega.p, omega.q) - pairs;
    } else if (cls.epsilon == -1) {
        auto [s1, sm1] = ta_unit_singletons(n, avoid);
        if (s1) out.push_back(1.0);
        if (sm1) out.push_back(-1.0);
        pairs = (omega.size - s1 - sm1) / 2;
    } else {
        pairs = omega.size / 2;
    }
    for (Index i = 0; i < pairs; ++i) {
        Complex mu;
        do {
            mu = std::polar(rad(rng), ang(rng));
        } while (collides(mu, avoid) || collides(1.0 / star(mu, cls.star), avoid) || collides(mu, out));
        out.push_back(mu);
        out.push_back(1.0 / star(mu, cls.star));
    }
    for (Index i = 0; i < singles; ++i) {
        Complex z;
        do {
            z = std::polar(1.0, ang(rng));
        } while (collides(z, avoid) || collides(z, out));
        out.push_back(z);
    }
    return out;
}

}  // namespace

Matrix solve_psi(const DeltaPattern& delta, const Matrix& omega, std::mt19937_64& rng, int attempts) {
    const SymmetryClass cls = delta.cls;
    const Index r = omega.rows();
    if (omega.cols() != r) throw Error(ErrorCode::DimensionMismatch, "Omega must be square");
    check_star_skew(omega, cls, "Omega");
    if (!numerically_nonsingular(omega, 1e-12)) throw Error(ErrorCode::SingularMatrix, "Omega is singular");
    if (!cls.transpose()) {
        Inertia in = inertia(sqrt_minus_eps(cls.epsilon) * omega);
        if (in.q < delta.p || in.p < delta.q)
            throw Error(ErrorCode::Infeasible, "inertia of Omega cannot absorb Delta");
    } else if (delta.t > r) {
        throw Error(ErrorCode::Infeasible, "rank of Delta exceeds the order of Omega");
    }
    const Matrix dm = delta.matrix();
    for (int a = 0; a < attempts; ++a) {
        Matrix b = random_complex(r, r, rng);
        StarFactorization fb;
        try {
            fb = star_factorize(b * omega * star(b, cls.star), cls);
        } catch (const Error&) {
            continue;
        }
        if (fb.delta.rank() != r || !numerically_nonsingular(fb.y, 1e-10)) continue;
        b = linear_solve(fb.y, b);
        std::optional<Matrix> phi = canonical_phi(delta, fb.delta, rng);
        if (!phi) throw Error(ErrorCode::Infeasible, "Delta does not fit the pattern of Omega");
        Matrix psi = *phi * b;
        const double scale = dm.norm() > 0 ? dm.norm() : psi.squaredNorm() * omega.norm();
        if ((psi * omega * star(psi, cls.star) + dm).norm() <= 1e-10 * std::max(scale, 1e-300)) return psi;
    }
    throw Error(ErrorCode::RetryExhausted, "no well-conditioned B in " + std::to_string(attempts) + " draws");
}

RemainingSpectrum build_remaining(const DeltaPattern& omega, const std::vector<Complex>& values,
                                  SymmetryClass cls) {
    const Index r = omega.size;
    if (Index(values.size()) != r)
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(r) + " remaining eigenvalues, got " + std::to_string(values.size()));
    EigenPairSet e = pairing_of(values, cls);
    if (!e.complete())
        throw Error(ErrorCode::PairingNotClosed, "remaining eigenvalues are not closed under 1/conj");
    std::vector<std::pair<Index, Index>> pairs;
    std::vector<Index> singles;
    for (auto [i, j] : e.pairs) {
        if (i == j)
            singles.push_back(i);
        else
            pairs.emplace_back(i, j);
    }
    const double eps = double(cls.epsilon);
    Index pos = 0;
    if (!cls.transpose()) {
        const Index m = Index(pairs.size());
        if (omega.p < m || omega.q < m)
            throw Error(ErrorCode::Infeasible, "too many off-circle pairs for the required inertia");
        pos = omega.p - m;
    } else if (cls.epsilon == 1 && !singles.empty()) {
        throw Error(ErrorCode::Infeasible, "+1 and -1 cannot be simple eigenvalues of a T-palindromic system");
    }

    RemainingSpectrum out;
    Matrix lambda = Matrix::Zero(r, r), s = Matrix::Zero(r, r);
    Index o = 0;
    for (auto [i, j] : pairs) {
        lambda(o, o) = values[size_t(i)];
        lambda(o + 1, o + 1) = values[size_t(j)];
        s(o, o + 1) = 1.0;
        s(o + 1, o) = -eps;
        out.values.push_back(values[size_t(i)]);
        out.values.push_back(values[size_t(j)]);
        o += 2;
    }
    for (size_t c = 0; c < singles.size(); ++c) {
        lambda(o, o) = values[size_t(singles[c])];
        if (cls.transpose()) {
            s(o, o) = 1.0;
        } else {
            const double sigma = Index(c) < pos ? 1.0 : -1.0;
            s(o, o) = sigma / sqrt_minus_eps(cls.epsilon);
        }
        out.values.push_back(values[size_t(singles[c])]);
        ++o;
    }
    StarFactorization g = star_factorize(s, cls);
    if (!(g.delta == omega))
        throw Error(ErrorCode::Infeasible, "remaining eigenvalues do not match the inertia of Omega");
    out.t_hat = linear_solve(g.y, lambda * g.y);
    return out;
}

IepResult solve_iep_full(const Matrix& x, const Matrix& t, SymmetryClass cls, std::uint64_t seed, int attempts) {
    StandardPair pair(x, t);
    if (!pair.full()) throw Error(ErrorCode::DimensionMismatch, "solve_iep_full needs X of size n x 2n");
    SBasis basis = s_basis_constrained(x, t, cls);
    std::mt19937_64 rng(seed);
    if (basis.dim() == 0) throw Error(ErrorCode::NoSolution, "the parameter space is {0}");
    for (int a = 1; a <= attempts; ++a) {
        Matrix s;
        try {
            s = sample_nonsingular(basis, rng, 1);
        } catch (const Error&) {
            continue;
        }
        try {
            PalindromicSystem sys = coefficients_from_pair(x, t, s, cls);
            return IepResult{sys, x, t, s, a, 1.0};
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SingularLeadingBlock && e.code() != ErrorCode::SingularMatrix &&
                e.code() != ErrorCode::SymmetryViolation)
                throw;
        }
    }
    throw Error(ErrorCode::NoSolution, "no nonsingular S found in " + std::to_string(attempts) + " attempts");
}

IepResult solve_iep_partial(const IepProblem& pb) {
    const SymmetryClass cls = pb.cls;
    const Index n = pb.n, k = pb.t1.rows();
    if (pb.x1.rows() != n || pb.x1.cols() != k || pb.t1.cols() != k || k < 1 || k > 2 * n)
        throw Error(ErrorCode::DimensionMismatch, "IEP shapes");
    require_finite(pb.x1, "X1");
    require_finite(pb.t1, "T1");
    if (k == 2 * n) return solve_iep_full(pb.x1, pb.t1, cls, pb.options.seed, pb.options.attempts);
    if (!numerically_nonsingular(pb.t1, 1e-12)) throw Error(ErrorCode::SingularMatrix, "T1 is singular");
    {
        Matrix w(2 * n, k);
        w.topRows(n) = pb.x1;
        w.bottomRows(n) = -pb.x1 * inverse(pb.t1);
        if (!full_column_rank(w, 1e-10))
            throw Error(ErrorCode::InvalidArgument, "[X1; -X1 T1^-1] lacks full column rank");
    }
    const std::vector<Complex> lam1 = spectrum(pb.t1);
    if (!pairing_of(lam1, cls).complete())
        throw Error(ErrorCode::PairingNotClosed, "spectrum of T1 is not closed under 1/conj");
    const Index r = 2 * n - k;
    if (cls.transpose() && cls.epsilon == 1 && r % 2 != 0)
        throw Error(ErrorCode::Infeasible, "parity: 2n-k must be even for T-palindromic systems");
    if (pb.options.remaining) {
        for (Complex z : *pb.options.remaining)
            if (collides(z, lam1))
                throw Error(ErrorCode::RemainingEigenvalueConflict, "remaining eigenvalue meets the spectrum of T1");
    }
    if (cls.transpose() && cls.epsilon == -1) {
        auto [s1, sm1] = ta_unit_singletons(n, lam1);
        if (pb.options.remaining && (count_near(*pb.options.remaining, 1.0) % 2 != s1 ||
                                     count_near(*pb.options.remaining, -1.0) % 2 != sm1))
            throw Error(ErrorCode::Infeasible, "parity: +1 and -1 need multiplicity of the same parity as n");
    }

    std::mt19937_64 rng(pb.options.seed);
    const SBasis basis1 = s_basis(pb.t1, cls);
    if (basis1.dim() == 0) throw Error(ErrorCode::NoSolution, "the parameter space of T1 is {0}");
    std::string last = "no attempt made";
    ErrorCode last_code = ErrorCode::NonsingularityRetryExhausted;
    for (int a = 1; a <= pb.options.attempts; ++a) {
        try {
            const Matrix s1 = sample_nonsingular(basis1, rng, 1);
            Index p = 0, q = 0;
            if (!cls.transpose()) {
                Inertia in = inertia(sqrt_minus_eps(cls.epsilon) * s1);
                p = in.p;
                q = in.q;
                if (p > n || q > n)
                    throw Error(ErrorCode::Infeasible, "inertia of S1 exceeds n");
            }
            const Matrix c = pb.x1 * s1 * star(pb.x1, cls.star);
            StarFactorization fy = star_factorize(c, cls);
            DeltaPattern omega = cls.transpose() ? make_delta(cls, 0, 0, r, r) : make_delta(cls, n - p, n - q, 0, r);
            std::vector<Complex> values =
                pb.options.remaining ? *pb.options.remaining : default_remaining(omega, n, lam1, rng);
            RemainingSpectrum rem = build_remaining(omega, values, cls);
            const Matrix om = omega.matrix();
            Matrix psi = solve_psi(fy.delta, om, rng, 1);

            Matrix x(n, 2 * n);
            x << pb.x1, fy.y * psi;
            Matrix t = block_diag(pb.t1, rem.t_hat);
            Matrix s = block_diag(s1, om);
            PalindromicSystem sys = coefficients_from_pair(x, t, s, cls);
            if (pair_residual(sys, pb.x1, pb.t1) > 1e-9) {
                last = "pair residual above 1e-9";
                last_code = ErrorCode::ResidualTooLarge;
                continue;
            }
            return IepResult{sys, x, t, s, a, fy.cond_y};
        } catch (const Error& e) {
            // Conditions fixed by the problem data do not improve with a new draw.
            if (e.code() == ErrorCode::PairingNotClosed || e.code() == ErrorCode::RemainingEigenvalueConflict ||
                e.code() == ErrorCode::DimensionMismatch)
                throw;
            last = e.detail();
            last_code = e.code();
        }
    }
    if (last_code == ErrorCode::Infeasible) throw Error(ErrorCode::Infeasible, last);
    throw Error(ErrorCode::NonsingularityRetryExhausted,
                std::to_string(pb.options.attempts) + " attempts failed; last: " +
                    error_name(last_code) + ": " + last);
}

}  // namespace palinverse
