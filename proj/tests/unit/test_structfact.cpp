#include <doctest.h>

#include "generators.hpp"
#include "palinverse/error.hpp"
#include "palinverse/structfact.hpp"

using namespace palinverse;

namespace {

double reconstruction(const Matrix& b, const StarFactorization& f, SymmetryClass cls) {
    return (f.y * f.delta.matrix() * star(f.y, cls.star) - b).norm() / b.norm();
}

// B = C Δ₀ C⋆ with Δ₀ canonical of the requested rank: Sylvester gives the inertia.
Matrix planted(SymmetryClass cls, Index n, Index p, Index q, Index t, std::mt19937_64& rng) {
    Index r = cls.transpose() ? t : p + q;
    Matrix c = testgen::gaussian(n, r, rng);
    Matrix d = build_delta(cls, p, q, t, r);
    return c * d * star(c, cls.star);
}

}  // namespace

TEST_CASE("inertia counts") {
    Matrix h = Matrix::Zero(3, 3);
    h(0, 0) = 1;
    h(1, 1) = -1;
    Inertia in = inertia(h);
    CHECK(in.p == 1);
    CHECK(in.q == 1);
    CHECK(in.z == 1);

    Inertia neg = inertia(-Matrix::Identity(2, 2));
    CHECK(neg.p == 0);
    CHECK(neg.q == 2);

    std::mt19937_64 rng(21);
    Matrix g = testgen::unitary(3, rng);
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 3;
    d(1, 1) = -2;
    d(2, 2) = 5;
    Inertia syl = inertia(g.adjoint() * d * g);
    CHECK(syl.p == 2);
    CHECK(syl.q == 1);
    CHECK(syl.z == 0);

    Matrix notherm = Matrix::Zero(2, 2);
    notherm(0, 1) = 1;
    CHECK_THROWS_AS(inertia(notherm), Error);
}

TEST_CASE("build_delta canonical patterns") {
    Matrix d = build_delta(SymmetryClass::from_code("hp"), 1, 1, 0, 2);
    CHECK(d(0, 0) == Complex(0, 1));
    CHECK(d(1, 1) == Complex(0, -1));

    Matrix j = build_delta(SymmetryClass::from_code("tp"), 0, 0, 2, 2);
    CHECK(j(0, 1) == Complex(1));
    CHECK(j(1, 0) == Complex(-1));
    CHECK(j(0, 0) == Complex(0));

    Matrix e = build_delta(SymmetryClass::from_code("ta"), 0, 0, 1, 3);
    CHECK(e(0, 0) == Complex(1));
    CHECK(e.norm() == 1.0);

    Matrix h = build_delta(SymmetryClass::from_code("ha"), 2, 1, 0, 4);
    CHECK(h(0, 0) == Complex(1));
    CHECK(h(2, 2) == Complex(-1));
    CHECK(h(3, 3) == Complex(0));

    CHECK_THROWS_AS(build_delta(SymmetryClass::from_code("tp"), 0, 0, 3, 4), Error);
    CHECK_THROWS_AS(build_delta(SymmetryClass::from_code("hp"), 2, 2, 0, 3), Error);
}

TEST_CASE("star_factorize canonical inputs") {
    auto tp = SymmetryClass::from_code("tp");
    Matrix j = build_delta(tp, 0, 0, 2, 2);
    auto f = star_factorize(j, tp);
    CHECK(f.delta.t == 2);
    CHECK(reconstruction(j, f, tp) <= 1e-14);

    auto hp = SymmetryClass::from_code("hp");
    Matrix b = Complex(0, 1) * Matrix::Identity(2, 2);
    auto g = star_factorize(b, hp);
    CHECK(g.delta.p == 0);
    CHECK(g.delta.q == 2);
    CHECK((g.delta.matrix() - b).norm() == 0.0);
    CHECK(reconstruction(b, g, hp) <= 1e-14);

    CHECK_THROWS_AS(star_factorize(Matrix::Identity(2, 2), tp), Error);
}

TEST_CASE("star_factorize random full-rank inputs") {
    std::mt19937_64 rng(31);
    for (auto cls : testgen::kClasses) {
        for (Index n : {1, 2, 5, 6, 9}) {
            if (cls == SymmetryClass::from_code("tp") && n % 2) continue;
            Matrix b = testgen::skew_part(testgen::gaussian(n, n, rng), cls);
            auto f = star_factorize(b, cls);
            CHECK(reconstruction(b, f, cls) <= 1e-10);
            CHECK(f.delta.rank() == n);
            CHECK(f.y.rows() == n);
        }
    }
}

TEST_CASE("star_factorize planted rank-deficient inputs keep Sylvester inertia") {
    std::mt19937_64 rng(32);
    auto hp = SymmetryClass::from_code("hp"), ha = SymmetryClass::from_code("ha");
    for (auto cls : {hp, ha}) {
        Matrix b = planted(cls, 7, 3, 2, 0, rng);
        auto f = star_factorize(b, cls);
        CHECK(f.delta.p == 3);
        CHECK(f.delta.q == 2);
        CHECK(reconstruction(b, f, cls) <= 1e-10);
        // Zero block trails.
        CHECK(f.delta.matrix().bottomRightCorner(2, 2).norm() == 0.0);
    }
    auto ta = SymmetryClass::from_code("ta"), tp = SymmetryClass::from_code("tp");
    Matrix bs = planted(ta, 6, 0, 0, 4, rng);
    CHECK(star_factorize(bs, ta).delta.t == 4);
    Matrix bk = planted(tp, 7, 0, 0, 4, rng);
    auto fk = star_factorize(bk, tp);
    CHECK(fk.delta.t == 4);
    CHECK(reconstruction(bk, fk, tp) <= 1e-10);
}

TEST_CASE("repeated singular values in symmetric and skew inputs") {
    std::mt19937_64 rng(33);
    auto ta = SymmetryClass::from_code("ta"), tp = SymmetryClass::from_code("tp");
    Matrix u = testgen::unitary(6, rng);
    Matrix bs = u * u.transpose();  // all Takagi values equal to 1
    auto f = star_factorize(bs, ta);
    CHECK(reconstruction(bs, f, ta) <= 1e-10);
    Matrix j = build_delta(tp, 0, 0, 6, 6);
    Matrix bk = u * j * u.transpose();
    auto g = star_factorize(bk, tp);
    CHECK(g.delta.t == 6);
    CHECK(reconstruction(bk, g, tp) <= 1e-10);
}

TEST_CASE("odd-rank skew input is rejected") {
    auto tp = SymmetryClass::from_code("tp");
    // Eight exact 2x2 blocks plus a tiny diagonal entry: skew to 1e-10, rank 17.
    Matrix b = Matrix::Zero(17, 17);
    for (Index k = 0; k < 8; ++k) {
        b(2 * k, 2 * k + 1) = 1;
        b(2 * k + 1, 2 * k) = -1;
    }
    b(16, 16) = 1.5e-10;
    CHECK_THROWS_AS(star_factorize(b, tp), Error);
}
