#ifndef SLSPEC_MAT2_HPP
#define SLSPEC_MAT2_HPP

#include <algorithm>
#include <cmath>
#include <complex>

#include "slspec/errors.hpp"

namespace slspec {

using cplx = std::complex<double>;

/// 2x2 complex matrix. Value type for transfer matrices, monodromy matrices,
/// period-shift matrices and their z-derivatives.
struct Mat2 {
    cplx a11{}, a12{}, a21{}, a22{};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    cplx trace() const { return a11 + a22; }
    cplx det() const { return a11 * a22 - a12 * a21; }
    /// (tr X)^2 - 4 det X
    cplx discr() const {
        const cplx t = trace();
        return t * t - 4.0 * det();
    }

    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    friend Mat2 operator*(cplx s, const Mat2& m) {
        return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
    }

    Mat2 inverse() const {
        const cplx d = det();
        if (std::abs(d) == 0.0) throw NumericError("Mat2::inverse: singular matrix");
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    std::array<cplx, 2> apply(const std::array<cplx, 2>& v) const {
        return {a11 * v[0] + a12 * v[1], a21 * v[0] + a22 * v[1]};
    }

    double max_abs() const {
        return std::max(std::max(std::abs(a11), std::abs(a12)),
                        std::max(std::abs(a21), std::abs(a22)));
    }
    bool finite() const {
        auto ok = [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
        return ok(a11) && ok(a12) && ok(a21) && ok(a22);
    }
};

inline double max_entry_dist(const Mat2& a, const Mat2& b) { return (a - b).max_abs(); }

} // namespace slspec

#endif
