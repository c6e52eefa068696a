// SPDX-License-Identifier: Apache-2.0
#include "palinverse/structfact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "palinverse/error.hpp"

namespace palinverse {

namespace {

constexpr double kRankTol = 1e-10;

// Real 2n×2n matrix of the antilinear map u ↦ Bū in coordinates [Re u; Im u].
RealMatrix antilinear_real(const Matrix& b) {
    const Index n = b.rows();
    RealMatrix r(2 * n, 2 * n);
    const RealMatrix br = b.real(), bi = b.imag();
    r << br, bi, bi, -br;
    return r;
}

Vector unrealify(const RealVector& v) {
    const Index n = v.size() / 2;
    Vector z(n);
    for (Index i = 0; i < n; ++i) z(i) = Complex(v(i), v(n + i));
    return z;
}

// Columns completing an orthonormal basis of the complement of span(z).
Matrix complement(const Matrix& z, Index n) {
    if (z.cols() == 0) return Matrix::Identity(n, n);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    return q.rightCols(n - z.cols());
}

StarFactorization factor_hermitian(const Matrix& b, SymmetryClass cls) {
    const Index n = b.rows();
    const Complex root = cls.epsilon == 1 ? Complex(0, 1) : Complex(1, 0);
    Matrix h = root * b;
    h = (0.5 * (h + h.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const RealVector& lam = es.eigenvalues();
    const double tau = kRankTol * (n ? lam.cwiseAbs().maxCoeff() : 0.0);

    std::vector<Index> pos, neg, zero;
    for (Index i = 0; i < n; ++i) {
        if (lam(i) > tau) pos.push_back(i);
        else if (lam(i) < -tau) neg.push_back(i);
        else zero.push_back(i);
    }
    auto by_magnitude = [&](Index a, Index c) { return std::abs(lam(a)) > std::abs(lam(c)); };
    std::sort(pos.begin(), pos.end(), by_magnitude);
    std::sort(neg.begin(), neg.end(), by_magnitude);

    // ε=+1: B = −iH, so negative eigenvalues give +i and lead. ε=−1: positives lead.
    std::vector<Index> order;
    if (cls.epsilon == 1) {
        order.insert(order.end(), neg.begin(), neg.end());
        order.insert(order.end(), pos.begin(), pos.end());
    } else {
        order.insert(order.end(), pos.begin(), pos.end());
        order.insert(order.end(), neg.begin(), neg.end());
    }
    order.insert(order.end(), zero.begin(), zero.end());

    StarFactorization f;
    f.y.resize(n, n);
    for (Index j = 0; j < n; ++j) {
        const Index k = order[j];
        const double s = std::abs(lam(k)) > tau ? std::sqrt(std::abs(lam(k))) : 1.0;
        f.y.col(j) = es.eigenvectors().col(k) * s;
    }
    f.delta = make_delta(cls, Index(pos.size()), Index(neg.size()), 0, n);
    return f;
}

// Complex symmetric B = Σ σ_j z_j z_jᵀ from the positive eigenpairs of the real
// symmetric embedding of u ↦ Bū.
StarFactorization factor_takagi(const Matrix& b, SymmetryClass cls) {
    const Index n = b.rows();
    Matrix bs = 0.5 * (b + b.transpose());
    RealMatrix r = antilinear_real(bs);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(r);
    const RealVector& lam = es.eigenvalues();
    const double tau = kRankTol * (n ? lam.cwiseAbs().maxCoeff() : 0.0);

    std::vector<Index> keep;
    for (Index i = 2 * n - 1; i >= 0; --i)
        if (lam(i) > tau) keep.push_back(i);
    const Index t = Index(keep.size());
    Matrix z(n, t);
    RealVector sig(t);
    for (Index j = 0; j < t; ++j) {
        z.col(j) = unrealify(es.eigenvectors().col(keep[j]));
        z.col(j).normalize();
        sig(j) = lam(keep[j]);
    }
    StarFactorization f;
    f.y.resize(n, n);
    f.y.leftCols(t) = z * sig.cwiseSqrt().asDiagonal();
    f.y.rightCols(n - t) = complement(z, n);
    f.delta = make_delta(cls, 0, 0, t, n);
    return f;
}

// Complex skew-symmetric B = Σ γ_j (z1_j z2_jᵀ − z2_j z1_jᵀ) from the Hermitian
// matrix i·R, R the (skew) embedding of u ↦ Bū. Each Youla pair shows up twice
// among the positive eigenvalues (w and J·conj(w)); the duplicate is deflated.
StarFactorization factor_youla(const Matrix& b, SymmetryClass cls) {
    const Index n = b.rows();
    Matrix bs = 0.5 * (b - b.transpose());
    Matrix h = Complex(0, 1) * antilinear_real(bs).cast<Complex>();
    h = (0.5 * (h + h.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const RealVector& lam = es.eigenvalues();
    const double tau = kRankTol * (n ? lam.cwiseAbs().maxCoeff() : 0.0);

    Matrix chosen(2 * n, 0);
    std::vector<Vector> z1s, z2s;
    std::vector<double> gammas;
    for (Index i = 2 * n - 1; i >= 0 && lam(i) > tau; --i) {
        Vector w = es.eigenvectors().col(i);
        if (chosen.cols()) w -= chosen * (chosen.adjoint() * w);
        if (w.norm() < 0.5) continue;
        w.normalize();
        // J·conj(w), J the real form of multiplication by i.
        Vector jw(2 * n);
        jw.head(n) = -w.tail(n).conjugate();
        jw.tail(n) = w.head(n).conjugate();
        if (chosen.cols()) jw -= chosen * (chosen.adjoint() * jw);
        jw -= w * (w.adjoint() * jw);
        jw.normalize();
        chosen.conservativeResize(Eigen::NoChange, chosen.cols() + 2);
        chosen.col(chosen.cols() - 2) = w;
        chosen.col(chosen.cols() - 1) = jw;

        Vector za = unrealify(w.real());
        Vector zb = unrealify(w.imag());
        // B conj(za) = γ zb; pattern needs B conj(z1) = −γ z2.
        Vector z1 = za / za.norm();
        Vector z2 = -zb / zb.norm();
        z1s.push_back(z1);
        z2s.push_back(z2);
        gammas.push_back(lam(i));
    }
    const Index h2 = Index(gammas.size());
    Matrix z(n, 2 * h2);
    for (Index j = 0; j < h2; ++j) {
        z.col(j) = z1s[j] * std::sqrt(gammas[j]);
        z.col(h2 + j) = z2s[j] * std::sqrt(gammas[j]);
    }
    Matrix zn(n, 2 * h2);
    for (Index j = 0; j < 2 * h2; ++j) zn.col(j) = z.col(j).normalized();
    StarFactorization f;
    f.y.resize(n, n);
    f.y.leftCols(2 * h2) = z;
    f.y.rightCols(n - 2 * h2) = complement(zn, n);
    f.delta = make_delta(cls, 0, 0, 2 * h2, n);
    return f;
}

}  // namespace

Inertia inertia(const Matrix& h) {
    if (h.rows() != h.cols()) throw Error(ErrorCode::DimensionMismatch, "inertia");
    const double scale = h.norm();
    if ((h - h.adjoint()).norm() > 1e-10 * scale) throw Error(ErrorCode::NotHermitian, "");
    Inertia out;
    if (h.rows() == 0) return out;
    Matrix hs = 0.5 * (h + h.adjoint());
    RealVector lam = Eigen::SelfAdjointEigenSolver<Matrix>(hs, Eigen::EigenvaluesOnly).eigenvalues();
    const double tau = 1e-10 * lam.cwiseAbs().maxCoeff();
    for (Index i = 0; i < lam.size(); ++i) {
        if (lam(i) > tau) ++out.p;
        else if (lam(i) < -tau) ++out.q;
        else ++out.z;
    }
    return out;
}

DeltaPattern make_delta(SymmetryClass cls, Index p, Index q, Index t, Index size) {
    if (p < 0 || q < 0 || t < 0 || size < 0) throw Error(ErrorCode::BadIndices, "negative index");
    if (cls.transpose()) {
        if (t > size) throw Error(ErrorCode::BadIndices, "t exceeds size");
        if (cls.epsilon == 1 && t % 2) throw Error(ErrorCode::BadIndices, "t must be even");
        return DeltaPattern{cls, 0, 0, t, size};
    }
    if (p + q > size) throw Error(ErrorCode::BadIndices, "p+q exceeds size");
    return DeltaPattern{cls, p, q, 0, size};
}

Matrix DeltaPattern::matrix() const {
    Matrix d = Matrix::Zero(size, size);
    if (cls.transpose()) {
        if (cls.epsilon == 1) {
            const Index h = t / 2;
            for (Index j = 0; j < h; ++j) {
                d(j, h + j) = 1.0;
                d(h + j, j) = -1.0;
            }
        } else {
            for (Index j = 0; j < t; ++j) d(j, j) = 1.0;
        }
        return d;
    }
    if (cls.epsilon == 1) {
        for (Index j = 0; j < q; ++j) d(j, j) = Complex(0, 1);
        for (Index j = 0; j < p; ++j) d(q + j, q + j) = Complex(0, -1);
    } else {
        for (Index j = 0; j < p; ++j) d(j, j) = 1.0;
        for (Index j = 0; j < q; ++j) d(p + j, p + j) = -1.0;
    }
    return d;
}

Matrix build_delta(SymmetryClass cls, Index p, Index q, Index t, Index size) {
    return make_delta(cls, p, q, t, size).matrix();
}

StarFactorization star_factorize(const Matrix& b, SymmetryClass cls) {
    if (b.rows() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "star_factorize");
    require_finite(b, "B");
    const double scale = b.norm();
    const Matrix bstar = star(b, cls.star);
    if ((bstar + double(cls.epsilon) * b).norm() > 1e-10 * scale)
        throw Error(ErrorCode::SymmetryViolation, "B is not (-epsilon)-symmetric");

    StarFactorization f;
    if (!cls.transpose()) {
        f = factor_hermitian(b, cls);
    } else if (cls.epsilon == -1) {
        f = factor_takagi(b, cls);
    } else {
        RealVector s = singular_values(b);
        Index r = 0;
        while (r < s.size() && s(r) > kRankTol * s(0)) ++r;
        if (r % 2) throw Error(ErrorCode::FactorizationFailure, "skew-symmetric input has odd rank");
        f = factor_youla(b, cls);
        if (f.delta.t != r) throw Error(ErrorCode::FactorizationFailure, "Youla pairing incomplete");
    }
    const Matrix rec = f.y * f.delta.matrix() * star(f.y, cls.star);
    if ((rec - b).norm() > 1e-10 * scale)
        throw Error(ErrorCode::FactorizationFailure, "reconstruction above 1e-10");
    RealVector sv = singular_values(f.y);
    f.cond_y = sv.size() ? sv(0) / sv(sv.size() - 1) : 1.0;
    return f;
}

}  // namespace palinverse
