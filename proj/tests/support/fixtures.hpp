// Reference problems shared by the unit and acceptance suites.
#pragma once

#include <vector>

#include "palinverse/system.hpp"

namespace fixtures {

using palinverse::Complex;
using palinverse::Matrix;
using palinverse::SymmetryClass;

inline const Complex I(0, 1);

inline Matrix example1_x1() {
    Matrix x(4, 4);
    x << 1, I, 0, 0,
         2, 2.0 * I, 1, 0,
         1, 1, I, I,
         1, -1, 1, -1;
    return x;
}

// diag(1+i, 1/(1+i)⋆, 2+3i, 1/(2+3i)⋆) with ⋆ per class.
inline Matrix example1_t1(SymmetryClass cls) {
    const Complex a(1, 1), b(2, 3);
    Matrix t = Matrix::Zero(4, 4);
    t(0, 0) = a;
    t(1, 1) = 1.0 / palinverse::star(a, cls.star);
    t(2, 2) = b;
    t(3, 3) = 1.0 / palinverse::star(b, cls.star);
    return t;
}

struct UpdateCase {
    SymmetryClass cls;
    Matrix a1;
    Matrix a0;
    std::vector<Complex> replace;  // four decimals
    std::vector<Complex> with;
};

inline Matrix example2_a1_complex_t() {
    Matrix a(3, 3);
    a << 2, 1.0 + 2.0 * I, 1.0 - 2.0 * I,
         1, -1.0 + I, 1.0 + I,
         1.0 - 2.0 * I, 1.0 + I, 1;
    return a;
}

inline Matrix example2_a1_conj() {
    Matrix a(3, 3);
    a << 2.0 - 5.0 * I, 1.0 + 2.0 * I, 1.0 - 2.0 * I,
         1.0 + 2.0 * I, -1.0 + I, 1.0 + I,
         1.0 - 2.0 * I, 1.0 + I, 1.0 + 3.0 * I;
    return a;
}

inline Matrix skew3() {
    Matrix a(3, 3);
    a << 0, -3, 5,
         3, 0, -1,
         -5, 1, 0;
    return a;
}

inline UpdateCase example2(const std::string& code) {
    const SymmetryClass cls = SymmetryClass::from_code(code);
    if (code == "tp") {
        Matrix a0(3, 3);
        a0 << 4, -3.0 + I, 5,
              -3.0 + I, 1, -1,
              5, -1, -1;
        return {cls, example2_a1_complex_t(), a0,
                {Complex(-4.0685, 10.3032), Complex(-0.0332, -0.0840)},
                {Complex(-6, 9), 1.0 / Complex(-6, 9)}};
    }
    if (code == "ta") {
        Matrix a1(3, 3);
        a1 << 2, 1, 1,
              1, -1, 1,
              1, 1, 1;
        return {cls, a1, skew3(), {4.2361, 0.2361}, {4.0, 0.25}};
    }
    if (code == "hp") {
        Matrix a0(3, 3);
        a0 << 4, -3, 5,
              -3, 1, -1,
              5, -1, -1;
        return {cls, example2_a1_conj(), a0,
                {Complex(0.8745, 0.6115), Complex(0.7680, 0.5371)},
                {Complex(1, 1), 1.0 / Complex(1, -1)}};
    }
    // A₀ must be skew-Hermitian for this class.
    return {cls, example2_a1_conj(), skew3(),
            {Complex(0.8195, -2.4199), Complex(0.1255, -0.3707)},
            {Complex(1, -2.5), 1.0 / Complex(1, 2.5)}};
}

inline Matrix diag(const std::vector<Complex>& v) {
    Matrix t = Matrix::Zero(Eigen::Index(v.size()), Eigen::Index(v.size()));
    for (size_t i = 0; i < v.size(); ++i) t(Eigen::Index(i), Eigen::Index(i)) = v[i];
    return t;
}

}  // namespace fixtures
