// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <random>

#include <Eigen/Dense>

namespace palinverse {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// The ⋆ of a symmetry class: plain transpose or conjugate transpose.
enum class Star { Transpose, ConjugateTranspose };

Matrix star(const Matrix& m, Star s);
Complex star(Complex z, Star s);

void require_finite(const Matrix& m, const char* what);

Matrix linear_solve(const Matrix& a, const Matrix& b);
Matrix inverse(const Matrix& a);

struct RankFactorization {
    Matrix z1;
    Matrix z2;
    Index rank = 0;
};

// M = Z1 Z2⋆ with both factors of full column rank. Default tol is 1e-10 σ_max(M).
RankFactorization rank_factorize(const Matrix& m, Star s, std::optional<double> tol = {});

struct EigenDecomposition {
    Vector values;
    Matrix vectors;  // unit 2-norm columns
};

EigenDecomposition dense_eig(const Matrix& a);

RealVector singular_values(const Matrix& m);
double sigma_max(const Matrix& m);
double sigma_min(const Matrix& m);
double norm2(const Matrix& m);
// σ_min > rel·σ_max (an empty matrix counts as nonsingular).
bool numerically_nonsingular(const Matrix& m, double rel);
bool full_column_rank(const Matrix& m, double rel);

// Real coordinates of a complex matrix: column-major (re, im) interleaved.
RealVector to_real(const Matrix& m);
Matrix from_real(const RealVector& v, Index rows, Index cols);

// Orthonormal basis of the null space of a real matrix; singular values at or
// below rel·max(σ_max, scale) count as zero. `scale` is the size the operator
// would have without cancellation, so an all-rounding-noise matrix reads as 0.
RealMatrix real_null_space(const RealMatrix& a, double rel, double scale = 0.0);

Matrix random_complex(Index rows, Index cols, std::mt19937_64& rng);
RealVector random_normal(Index size, std::mt19937_64& rng);

Matrix block_diag(const Matrix& a, const Matrix& b);

}  // namespace palinverse
