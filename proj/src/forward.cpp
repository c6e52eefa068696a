// SPDX-License-Identifier: Apache-2.0
#include "palinverse/forward.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "palinverse/error.hpp"

namespace palinverse {

namespace {

std::string format_complex(Complex z) {
    std::ostringstream os;
    os.precision(6);
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

}  // namespace

Linearization linearize(const PalindromicSystem& sys) {
    const Index n = sys.n();
    Linearization lin;
    lin.m1 = Matrix::Identity(2 * n, 2 * n);
    lin.m1.topLeftCorner(n, n) = star(sys.a1(), sys.star());
    lin.m0 = Matrix::Zero(2 * n, 2 * n);
    lin.m0.topLeftCorner(n, n) = sys.a0();
    lin.m0.topRightCorner(n, n) = double(sys.epsilon()) * sys.a1();
    lin.m0.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
    return lin;
}

Index EigenPairSet::partner(Index i) const {
    for (const auto& [a, b] : pairs) {
        if (a == i) return b;
        if (b == i) return a;
    }
    return -1;
}

void EigenPairSet::require_complete() const {
    if (complete()) return;
    throw Error(ErrorCode::PairingFailure,
                "no partner for " + format_complex(values[size_t(unmatched.front())]));
}

void pair_eigenvalues(EigenPairSet& eigs, double pairing_tol) {
    const Index m = eigs.size();
    const Star s = eigs.cls.star;
    std::vector<Index> order(m);
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return std::abs(eigs.values[size_t(a)]) < std::abs(eigs.values[size_t(b)]);
    });
    auto err = [&](Index i, Index j) {
        return std::abs(eigs.values[size_t(i)] * star(eigs.values[size_t(j)], s) - 1.0);
    };
    std::vector<bool> used(m, false);
    eigs.pairs.clear();
    eigs.unmatched.clear();
    for (Index i : order) {
        if (used[i]) continue;
        used[i] = true;
        Index best = -1;
        double best_err = 0.0;
        for (Index j : order) {
            if (used[j]) continue;
            double e = err(i, j);
            if (best < 0 || e < best_err) {
                best = j;
                best_err = e;
            }
        }
        const double self_err = err(i, i);
        const bool self_ok = self_err <= pairing_tol;
        if (self_ok && (best < 0 || self_err <= best_err)) {
            eigs.pairs.emplace_back(i, i);
        } else if (best >= 0 && best_err <= pairing_tol) {
            used[best] = true;
            eigs.pairs.emplace_back(i, best);
        } else if (self_ok) {
            eigs.pairs.emplace_back(i, i);
        } else {
            eigs.unmatched.push_back(i);
        }
    }
}

EigenPairSet eig_full(const PalindromicSystem& sys, double pairing_tol) {
    const Index n = sys.n();
    Linearization lin = linearize(sys);
    EigenDecomposition ed = dense_eig(-linear_solve(lin.m1, lin.m0));

    EigenPairSet out;
    out.cls = sys.cls();
    out.vectors.resize(n, 2 * n);
    const double a1n = sys.a1().norm(), a0n = sys.a0().norm();
    // Left eigenvectors are the rows of V⁻¹; κ_i = ‖y_i‖‖x_i‖ with ‖x_i‖ = 1.
    Matrix vinv;
    bool have_left = true;
    try {
        vinv = inverse(ed.vectors);
    } catch (const Error&) {
        have_left = false;
    }
    for (Index i = 0; i < 2 * n; ++i) {
        const Complex lambda = ed.values(i);
        // The pencil vector is [λy; y]; take the better scaled half.
        Vector v = std::abs(lambda) > 1.0 ? Vector(ed.vectors.col(i).head(n))
                                          : Vector(ed.vectors.col(i).tail(n));
        v /= v.norm();
        out.values.push_back(lambda);
        out.vectors.col(i) = v;
        const double scale = a1n * (1.0 + std::norm(lambda)) + a0n * std::abs(lambda);
        out.residuals.push_back((eval_q(sys, lambda) * v).norm() / scale);
        out.conditions.push_back(have_left ? vinv.row(i).norm() : INFINITY);
    }
    pair_eigenvalues(out, pairing_tol);
    return out;
}

PairSelection select_pairs(const EigenPairSet& eigs, const std::vector<Complex>& targets, double tol) {
    const Index m = eigs.size();
    std::vector<bool> chosen(m, false);
    PairSelection sel;
    for (Complex target : targets) {
        Index best = -1;
        double best_d = 0.0;
        for (Index i = 0; i < m; ++i) {
            if (chosen[i]) continue;
            double d = std::abs(eigs.values[size_t(i)] - target);
            if (best < 0 || d < best_d) {
                best = i;
                best_d = d;
            }
        }
        if (best < 0 || best_d > tol * std::max(1.0, std::abs(target)))
            throw Error(ErrorCode::TargetNotFound, format_complex(target));
        chosen[best] = true;
        sel.selected.push_back(best);
    }
    for (Index i : sel.selected) {
        Index p = eigs.partner(i);
        if (p < 0) throw Error(ErrorCode::PairingFailure, format_complex(eigs.values[size_t(i)]));
        if (!chosen[p])
            throw Error(ErrorCode::PairingNotClosed,
                        "partner of " + format_complex(eigs.values[size_t(i)]) + " not selected");
    }
    for (Index i = 0; i < m; ++i)
        if (!chosen[i]) sel.remaining.push_back(i);

    for (Index i : sel.selected)
        for (Index j : sel.remaining) {
            const Complex a = eigs.values[size_t(i)], b = eigs.values[size_t(j)];
            if (std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a)))
                throw Error(ErrorCode::SpectraOverlap, format_complex(a));
        }

    auto gather = [&](const std::vector<Index>& idx, Matrix& x, Matrix& t) {
        const Index k = Index(idx.size());
        x.resize(eigs.vectors.rows(), k);
        t = Matrix::Zero(k, k);
        for (Index c = 0; c < k; ++c) {
            x.col(c) = eigs.vectors.col(idx[size_t(c)]);
            t(c, c) = eigs.values[size_t(idx[size_t(c)])];
        }
    };
    gather(sel.selected, sel.x1, sel.t1);
    gather(sel.remaining, sel.x2, sel.t2);
    return sel;
}

}  // namespace palinverse
