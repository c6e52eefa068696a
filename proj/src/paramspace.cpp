// SPDX-License-Identifier: Apache-2.0
#include "palinverse/paramspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "palinverse/error.hpp"

namespace palinverse {

namespace {

double binom(Index n, Index k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (Index i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return std::round(r);
}

Matrix jordan_block(Complex lambda, const std::vector<Index>& partial) {
    Index m = std::accumulate(partial.begin(), partial.end(), Index(0));
    Matrix j = lambda * Matrix::Identity(m, m);
    Index o = 0;
    for (Index p : partial) {
        j.block(o, o, p, p) += nilpotent_shift(p);
        o += p;
    }
    return j;
}

// p×q upper triangular Hankel matrix with a single nonzero anti-diagonal r.
Matrix hankel_unit(Index p, Index q, Index r, Complex value) {
    Matrix h = Matrix::Zero(p, q);
    for (Index i = 0; i < p; ++i) {
        Index c = r - i;
        if (c >= 0 && c < q) h(i, c) = value;
    }
    return h;
}

// Orthonormalizes matrices in the real inner product.
std::vector<Matrix> orthonormalize(const std::vector<Matrix>& mats, Index rows, Index cols) {
    if (mats.empty()) return {};
    RealMatrix coords(2 * rows * cols, Index(mats.size()));
    for (size_t i = 0; i < mats.size(); ++i) coords.col(Index(i)) = to_real(mats[i]);
    Eigen::JacobiSVD<RealMatrix> svd(coords, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    Index r = 0;
    while (r < sv.size() && sv(r) > 1e-10 * sv(0)) ++r;
    RealMatrix q = svd.matrixU().leftCols(r);
    std::vector<Matrix> out;
    for (Index j = 0; j < r; ++j) out.push_back(from_real(q.col(j), rows, cols));
    return out;
}

SBasis basis_from_null(const std::vector<Matrix>& gens, const RealMatrix& null, SymmetryClass cls,
                       const Matrix& t) {
    SBasis b;
    b.cls = cls;
    b.t = t;
    for (Index j = 0; j < null.cols(); ++j) {
        Matrix s = Matrix::Zero(t.rows(), t.cols());
        for (size_t i = 0; i < gens.size(); ++i) s += null(Index(i), j) * gens[i];
        b.basis.push_back(s);
    }
    return b;
}

bool self_paired(Complex z, Star s, double tol) { return std::abs(z * star(z, s) - 1.0) <= tol; }

}  // namespace

Index JordanGroup::size() const { return std::accumulate(partial.begin(), partial.end(), Index(0)); }

Index Pjcf::size() const {
    Index m = 0;
    for (const auto& pr : pairs) m += pr.first.size() + pr.second.size();
    for (const auto& g : unpaired) m += g.size();
    return m;
}

Matrix Pjcf::matrix() const {
    Matrix j = Matrix::Zero(size(), size());
    Index o = 0;
    auto put = [&](const JordanGroup& g) {
        Index m = g.size();
        j.block(o, o, m, m) = jordan_block(g.eigenvalue, g.partial);
        o += m;
    };
    for (const auto& pr : pairs) {
        put(pr.first);
        put(pr.second);
    }
    for (const auto& g : unpaired) put(g);
    return j;
}

void Pjcf::validate(SymmetryClass cls, double tol) const {
    auto check_partial = [](const JordanGroup& g) {
        if (g.partial.empty()) throw Error(ErrorCode::InvalidArgument, "empty Jordan group");
        for (size_t i = 0; i < g.partial.size(); ++i) {
            if (g.partial[i] < 1) throw Error(ErrorCode::InvalidArgument, "block size below one");
            if (i && g.partial[i] > g.partial[i - 1])
                throw Error(ErrorCode::InvalidArgument, "partial multiplicities must not increase");
        }
        if (g.eigenvalue == Complex(0.0)) throw Error(ErrorCode::InvalidArgument, "zero eigenvalue");
    };
    for (const auto& [a, b] : pairs) {
        check_partial(a);
        check_partial(b);
        if (std::abs(b.eigenvalue * star(a.eigenvalue, cls.star) - 1.0) > tol)
            throw Error(ErrorCode::PairingNotClosed, "paired eigenvalues are not (λ, 1/λ⋆)");
        if (a.partial != b.partial)
            throw Error(ErrorCode::InvalidArgument, "paired groups need identical multiplicities");
    }
    for (const auto& g : unpaired) {
        check_partial(g);
        if (!self_paired(g.eigenvalue, cls.star, tol))
            throw Error(ErrorCode::PairingNotClosed, "unpaired eigenvalue is not self-paired");
    }
}

Pjcf pjcf_from_eigenvalues(const std::vector<Complex>& values, SymmetryClass cls,
                           std::vector<Index>* order, double tol) {
    const Index m = Index(values.size());
    std::vector<Index> idx(m);
    std::iota(idx.begin(), idx.end(), Index(0));
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Index a, Index b) { return std::abs(values[a]) < std::abs(values[b]); });
    std::vector<bool> used(m, false);
    // Each entry: (a-indices, b-indices) or singles.
    std::vector<std::pair<std::vector<Index>, std::vector<Index>>> pair_groups;
    std::vector<std::vector<Index>> single_groups;
    auto close = [&](Complex x, Complex y) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(x)); };

    for (Index i : idx) {
        if (used[i]) continue;
        used[i] = true;
        const Complex z = values[i];
        if (self_paired(z, cls.star, tol)) {
            bool merged = false;
            for (auto& g : single_groups)
                if (close(values[g.front()], z)) {
                    g.push_back(i);
                    merged = true;
                    break;
                }
            if (!merged) single_groups.push_back({i});
            continue;
        }
        Index best = -1;
        double best_err = tol;
        for (Index j : idx) {
            if (used[j]) continue;
            double err = std::abs(z * star(values[j], cls.star) - 1.0);
            if (err <= best_err) {
                best_err = err;
                best = j;
            }
        }
        if (best < 0) throw Error(ErrorCode::PairingNotClosed, "eigenvalue without partner");
        used[best] = true;
        bool merged = false;
        for (auto& [ga, gb] : pair_groups) {
            if (close(values[ga.front()], z)) {
                ga.push_back(i);
                gb.push_back(best);
                merged = true;
                break;
            }
            if (close(values[gb.front()], z)) {
                ga.push_back(best);
                gb.push_back(i);
                merged = true;
                break;
            }
        }
        if (!merged) pair_groups.push_back({{i}, {best}});
    }

    Pjcf jcf;
    std::vector<Index> perm;
    for (auto& [ga, gb] : pair_groups) {
        JordanGroup a{values[ga.front()], std::vector<Index>(ga.size(), 1)};
        JordanGroup b{values[gb.front()], std::vector<Index>(gb.size(), 1)};
        jcf.pairs.emplace_back(a, b);
        perm.insert(perm.end(), ga.begin(), ga.end());
        perm.insert(perm.end(), gb.begin(), gb.end());
    }
    for (auto& g : single_groups) {
        jcf.unpaired.push_back(JordanGroup{values[g.front()], std::vector<Index>(g.size(), 1)});
        perm.insert(perm.end(), g.begin(), g.end());
    }
    if (order) *order = perm;
    return jcf;
}

Matrix SBasis::combine(const RealVector& c) const {
    Matrix s = Matrix::Zero(t.rows(), t.cols());
    for (Index i = 0; i < dim(); ++i) s += c(i) * basis[size_t(i)];
    return s;
}

Matrix pascal_matrix(Index m) {
    Matrix l = Matrix::Zero(m, m);
    // 1-based l_ij = C(m−j, m−i) for i ≥ j.
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j <= i; ++j) l(i, j) = binom(m - 1 - j, m - 1 - i);
    return l;
}

Matrix pascal_scaling(Index m, Complex lambda) {
    if (lambda == Complex(0.0)) throw Error(ErrorCode::ZeroLambda, "pascal_scaling");
    Vector left(m), right(m);
    for (Index i = 0; i < m; ++i) {
        left(i) = std::pow(lambda, double(m - 1 - i));
        right(i) = std::pow(-1.0 / lambda, double(i));
    }
    return left.asDiagonal() * pascal_matrix(m) * right.asDiagonal();
}

Matrix nilpotent_shift(Index m) {
    Matrix n = Matrix::Zero(m, m);
    for (Index i = 0; i + 1 < m; ++i) n(i, i + 1) = 1.0;
    return n;
}

std::vector<Matrix> star_skew_basis(Index m, SymmetryClass cls) {
    std::vector<Matrix> out;
    const Complex I(0, 1);
    const double r2 = 1.0 / std::sqrt(2.0);
    auto unit = [&](Index i, Index j) {
        Matrix e = Matrix::Zero(m, m);
        e(i, j) = 1.0;
        return e;
    };
    for (Index i = 0; i < m; ++i) {
        if (cls.transpose()) {
            if (cls.epsilon == -1) {  // symmetric
                out.push_back(unit(i, i));
                out.push_back(I * unit(i, i));
            }
        } else {
            // skew-Hermitian (ε=+1) has imaginary diagonal, Hermitian real.
            out.push_back((cls.epsilon == 1 ? I : Complex(1)) * unit(i, i));
        }
        for (Index j = i + 1; j < m; ++j) {
            Matrix e = unit(i, j), f = unit(j, i);
            if (cls.transpose()) {
                Matrix g = cls.epsilon == 1 ? Matrix(e - f) : Matrix(e + f);
                out.push_back(r2 * g);
                out.push_back(r2 * I * g);
            } else if (cls.epsilon == 1) {
                out.push_back(r2 * (e - f));
                out.push_back(r2 * I * (e + f));
            } else {
                out.push_back(r2 * (e + f));
                out.push_back(r2 * I * (e - f));
            }
        }
    }
    return out;
}

SBasis s_basis(const Matrix& t, SymmetryClass cls) {
    if (t.rows() != t.cols()) throw Error(ErrorCode::DimensionMismatch, "s_basis");
    const Index m = t.rows();
    auto gens = star_skew_basis(m, cls);
    const Matrix ts = star(t, cls.star);
    RealMatrix a(2 * m * m, Index(gens.size()));
    for (size_t i = 0; i < gens.size(); ++i) a.col(Index(i)) = to_real(gens[i] - t * gens[i] * ts);
    SBasis b = basis_from_null(gens, real_null_space(a, 1e-10, 1.0 + std::pow(norm2(t), 2)), cls, t);
    b.structurally_singular = b.dim() == 0;
    return b;
}

SBasis s_basis_constrained(const Matrix& x, const Matrix& t, SymmetryClass cls) {
    if (t.rows() != t.cols() || x.cols() != t.rows())
        throw Error(ErrorCode::DimensionMismatch, "s_basis_constrained");
    const Index m = t.rows(), n = x.rows();
    auto gens = star_skew_basis(m, cls);
    const Matrix ts = star(t, cls.star), xs = star(x, cls.star);
    const double st = std::max(1.0, std::pow(norm2(t), 2)), sx = std::max(1e-300, std::pow(norm2(x), 2));
    RealMatrix a(2 * m * m + 2 * n * n, Index(gens.size()));
    for (size_t i = 0; i < gens.size(); ++i) {
        a.col(Index(i)).head(2 * m * m) = to_real(gens[i] - t * gens[i] * ts) / st;
        a.col(Index(i)).tail(2 * n * n) = to_real(x * gens[i] * xs) / sx;
    }
    SBasis b = basis_from_null(gens, real_null_space(a, 1e-10, 2.0), cls, t);
    b.structurally_singular = b.dim() == 0;
    return b;
}

SBasis s_basis_pjcf(const Pjcf& jcf, SymmetryClass cls) {
    jcf.validate(cls);
    const Index m = jcf.size();
    const double eps = double(cls.epsilon);
    std::vector<Matrix> elems;
    SBasis out;
    out.cls = cls;
    out.t = jcf.matrix();

    Index o = 0;
    for (const auto& [a, b] : jcf.pairs) {
        const Index na = a.size(), nb = b.size();
        Index ro = 0;
        for (Index pj : a.partial) {
            Index co = 0;
            for (Index qk : b.partial) {
                const Matrix pk = pascal_scaling(qk, a.eigenvalue);
                for (Index r = 0; r < std::min(pj, qk); ++r)
                    for (Complex unit : {Complex(1, 0), Complex(0, 1)}) {
                        Matrix s1 = Matrix::Zero(na, nb);
                        s1.block(ro, co, pj, qk) = hankel_unit(pj, qk, r, unit) * pk;
                        Matrix s = Matrix::Zero(m, m);
                        s.block(o, o + na, na, nb) = s1;
                        s.block(o + na, o, nb, na) = -eps * star(s1, cls.star);
                        elems.push_back(s);
                    }
                co += qk;
            }
            ro += pj;
        }
        o += na + nb;
    }
    for (const auto& g : jcf.unpaired) {
        const Index ng = g.size();
        std::vector<Matrix> local;
        Index ro = 0;
        for (Index pj : g.partial) {
            Index co = 0;
            for (Index qk : g.partial) {
                const Matrix pk = pascal_scaling(qk, g.eigenvalue);
                for (Index r = 0; r < std::min(pj, qk); ++r)
                    for (Complex unit : {Complex(1, 0), Complex(0, 1)}) {
                        Matrix s = Matrix::Zero(ng, ng);
                        s.block(ro, co, pj, qk) = hankel_unit(pj, qk, r, unit) * pk;
                        local.push_back(s);
                    }
                co += qk;
            }
            ro += pj;
        }
        // Impose S⋆ = −εS on the free Hankel parameters.
        RealMatrix a(2 * ng * ng, Index(local.size()));
        double scale = 0.0;
        for (size_t i = 0; i < local.size(); ++i) {
            a.col(Index(i)) = to_real(local[i] + eps * star(local[i], cls.star));
            scale = std::max(scale, 2.0 * local[i].norm());
        }
        RealMatrix null = real_null_space(a, 1e-10, scale);
        if (null.cols() == 0) out.structurally_singular = true;
        for (Index j = 0; j < null.cols(); ++j) {
            Matrix blk = Matrix::Zero(ng, ng);
            for (size_t i = 0; i < local.size(); ++i) blk += null(Index(i), j) * local[i];
            Matrix s = Matrix::Zero(m, m);
            s.block(o, o, ng, ng) = blk;
            elems.push_back(s);
        }
        o += ng;
    }
    out.basis = orthonormalize(elems, m, m);
    return out;
}

Matrix sample_nonsingular(const SBasis& basis, std::mt19937_64& rng, int attempts) {
    if (basis.dim() == 0) throw Error(ErrorCode::NoNonsingularFound, "parameter space is {0}");
    for (int a = 0; a < attempts; ++a) {
        Matrix s = basis.combine(random_normal(basis.dim(), rng));
        if (numerically_nonsingular(s, 1e-8)) return s;
    }
    throw Error(ErrorCode::NoNonsingularFound, "no nonsingular draw in " + std::to_string(attempts) + " attempts");
}

Matrix sample_nonsingular(const SBasis& basis, std::uint64_t seed, int attempts) {
    std::mt19937_64 rng(seed);
    return sample_nonsingular(basis, rng, attempts);
}

AffineSolution solve_constrained_S(const SBasis& basis, const Matrix& x, const Matrix& c,
                                   SymmetryClass cls) {
    const Index n = x.rows();
    if (c.rows() != n || c.cols() != n || x.cols() != basis.t.rows())
        throw Error(ErrorCode::DimensionMismatch, "solve_constrained_S");
    const double cn = c.norm();
    if ((star(c, cls.star) + double(cls.epsilon) * c).norm() > 1e-10 * std::max(cn, 1e-300) && cn > 0)
        throw Error(ErrorCode::SymmetryViolation, "C must satisfy C⋆ = −εC");
    const Matrix xs = star(x, cls.star);
    AffineSolution out;
    out.particular = Matrix::Zero(basis.t.rows(), basis.t.cols());
    if (basis.dim() == 0) {
        out.residual = cn;
    } else {
        RealMatrix a(2 * n * n, basis.dim());
        for (Index i = 0; i < basis.dim(); ++i) a.col(i) = to_real(x * basis.basis[size_t(i)] * xs);
        RealVector rhs = to_real(c);
        // Basis members are orthonormal, so ‖X‖₂² bounds each column.
        const double scale = std::pow(norm2(x), 2);
        Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double smax = svd.singularValues()(0);
        if (smax > 0) svd.setThreshold(std::min(1.0, 1e-10 * std::max(smax, scale) / smax));
        RealVector coef = svd.solve(rhs);
        out.particular = basis.combine(coef);
        out.residual = (a * coef - rhs).norm();
        RealMatrix null = real_null_space(a, 1e-10, scale);
        for (Index j = 0; j < null.cols(); ++j) out.homogeneous.push_back(basis.combine(null.col(j)));
    }
    if (out.residual > 1e-8 * cn || (cn == 0.0 && out.residual > 0.0))
        throw Error(ErrorCode::Inconsistent, "X S X⋆ = C has no solution in the space");
    return out;
}

Matrix sample_nonsingular(const AffineSolution& family, std::mt19937_64& rng, int attempts) {
    if (numerically_nonsingular(family.particular, 1e-8)) return family.particular;
    const Index d = Index(family.homogeneous.size());
    if (d == 0) throw Error(ErrorCode::NoNonsingularFound, "affine family is a single singular point");
    const double scale = family.particular.norm() > 0 ? family.particular.norm() : 1.0;
    for (int a = 0; a < attempts; ++a) {
        RealVector g = random_normal(d, rng);
        Matrix s = family.particular;
        for (Index i = 0; i < d; ++i) s += scale * g(i) * family.homogeneous[size_t(i)];
        if (numerically_nonsingular(s, 1e-8)) return s;
    }
    throw Error(ErrorCode::NoNonsingularFound, "no nonsingular member of the affine family");
}

}  // namespace palinverse
