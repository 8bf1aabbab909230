#pragma once

#include <array>
#include <cmath>

#include "kho/errors.hpp"

namespace kho {

/// 2x2 real matrix acting on phase-space columns (Q, P) or ray columns
/// (x, theta).
struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;  // [[a, b], [c, d]]

    double det() const { return a * d - b * c; }

    Mat2 inverse() const {
        const double dt = det();
        if (dt == 0.0) throw error("Mat2: singular matrix");
        return Mat2{d / dt, -b / dt, -c / dt, a / dt};
    }

    friend Mat2 operator*(const Mat2& l, const Mat2& r) {
        return Mat2{l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
                    l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
    }

    std::array<double, 2> apply(double x, double y) const {
        return {a * x + b * y, c * x + d * y};
    }
};

inline Mat2 rotation_matrix(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return Mat2{c, -s, s, c};
}

/// Invertible coordinate map of Wigner arguments; symplectic (det = 1) when
/// it represents lossless optics.
struct LinearPhaseSpaceMap {
    Mat2 m;

    double det() const { return m.det(); }

    static LinearPhaseSpaceMap identity() { return {Mat2{}}; }
    static LinearPhaseSpaceMap rotation(double angle) {
        return {rotation_matrix(angle)};
    }
    static LinearPhaseSpaceMap scaling(double sq, double sp) {
        return {Mat2{sq, 0, 0, sp}};
    }
};

}  // namespace kho
