// SPDX-License-Identifier: Apache-2.0
#include "palinverse/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "palinverse/error.hpp"

namespace palinverse {

Matrix star(const Matrix& m, Star s) {
    if (s == Star::Transpose) return m.transpose();
    return m.adjoint();
}

Complex star(Complex z, Star s) { return s == Star::Transpose ? z : std::conj(z); }

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw Error(ErrorCode::NonFinite, what);
}

Matrix linear_solve(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols() || b.rows() != a.rows())
        throw Error(ErrorCode::DimensionMismatch, "linear_solve");
    if (a.rows() == 0) return Matrix(0, b.cols());
    Eigen::FullPivLU<Matrix> lu(a);
    const double scale = a.norm();
    // FullPivLU puts the smallest pivot last.
    const double pivot = std::abs(lu.matrixLU()(a.rows() - 1, a.rows() - 1));
    if (!(pivot >= 1e-13 * scale) || scale == 0.0)
        throw Error(ErrorCode::SingularMatrix, "pivot below 1e-13 relative");
    return lu.solve(b);
}

Matrix inverse(const Matrix& a) {
    return linear_solve(a, Matrix::Identity(a.rows(), a.cols()));
}

RankFactorization rank_factorize(const Matrix& m, Star s, std::optional<double> tol) {
    RankFactorization out;
    out.z1 = Matrix(m.rows(), 0);
    out.z2 = Matrix(m.cols(), 0);
    if (m.size() == 0) return out;
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = tol ? *tol : 1e-10 * sv(0);
    Index r = 0;
    while (r < sv.size() && sv(r) > cut) ++r;
    out.rank = r;
    out.z1 = svd.matrixU().leftCols(r) * sv.head(r).asDiagonal();
    if (s == Star::Transpose)
        out.z2 = svd.matrixV().leftCols(r).conjugate();
    else
        out.z2 = svd.matrixV().leftCols(r);
    return out;
}

EigenDecomposition dense_eig(const Matrix& a) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "dense_eig");
    EigenDecomposition out;
    if (a.rows() == 0) return out;
    Eigen::ComplexEigenSolver<Matrix> es(a, true);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "dense_eig");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    for (Index j = 0; j < out.vectors.cols(); ++j) {
        double nrm = out.vectors.col(j).norm();
        if (nrm > 0) out.vectors.col(j) /= nrm;
    }
    return out;
}

RealVector singular_values(const Matrix& m) {
    if (m.size() == 0) return RealVector();
    return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

double sigma_max(const Matrix& m) {
    RealVector s = singular_values(m);
    return s.size() ? s(0) : 0.0;
}

double sigma_min(const Matrix& m) {
    RealVector s = singular_values(m);
    return s.size() ? s(s.size() - 1) : 0.0;
}

double norm2(const Matrix& m) { return sigma_max(m); }

bool numerically_nonsingular(const Matrix& m, double rel) {
    if (m.rows() != m.cols()) return false;
    if (m.size() == 0) return true;
    RealVector s = singular_values(m);
    return s(0) > 0 && s(s.size() - 1) > rel * s(0);
}

bool full_column_rank(const Matrix& m, double rel) {
    if (m.cols() == 0) return true;
    if (m.rows() < m.cols()) return false;
    RealVector s = singular_values(m);
    return s(0) > 0 && s(s.size() - 1) > rel * s(0);
}

RealVector to_real(const Matrix& m) {
    RealVector v(2 * m.size());
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i) {
            Index k = j * m.rows() + i;
            v(2 * k) = m(i, j).real();
            v(2 * k + 1) = m(i, j).imag();
        }
    return v;
}

Matrix from_real(const RealVector& v, Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            Index k = j * rows + i;
            m(i, j) = Complex(v(2 * k), v(2 * k + 1));
        }
    return m;
}

RealMatrix real_null_space(const RealMatrix& a, double rel, double scale) {
    const Index n = a.cols();
    if (n == 0) return RealMatrix(0, 0);
    if (a.rows() == 0) return RealMatrix::Identity(n, n);
    Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = rel * std::max(sv.size() ? sv(0) : 0.0, scale);
    Index r = 0;
    while (r < sv.size() && sv(r) > cut) ++r;
    return svd.matrixV().rightCols(n - r);
}

RealVector random_normal(Index size, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    RealVector v(size);
    for (Index i = 0; i < size; ++i) v(i) = nd(rng);
    return v;
}

Matrix random_complex(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Matrix m(rows, cols);
    // Fill in a fixed order so results do not depend on evaluation order.
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) {
            double re = nd(rng);
            double im = nd(rng);
            m(i, j) = Complex(re, im) / std::sqrt(2.0);
        }
    return m;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    return m;
}

}  // namespace palinverse
