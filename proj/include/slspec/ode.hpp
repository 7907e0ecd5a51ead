#ifndef SLSPEC_ODE_HPP
#define SLSPEC_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "slspec/errors.hpp"

namespace slspec {

using cplx = std::complex<double>;

template <std::size_t N>
using State = std::array<cplx, N>;

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
};

namespace ode_detail {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

template <std::size_t N>
bool finite(const State<N>& y) {
    for (const auto& v : y)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

} // namespace ode_detail

/**
 * Adaptive embedded Runge-Kutta 5(4) over a single smooth segment.
 * PI step-size control, FSAL. Throws NumericError on step-size underflow
 * (reporting the failing t) and on non-finite states.
 */
template <std::size_t N, class Rhs>
State<N> integrate_segment(Rhs&& raw_rhs, State<N> y, double t0, double t1,
                           const OdeOptions& opt) {
    using namespace ode_detail;
    if (t1 <= t0) return y;

    const double len = t1 - t0;
    // Segments are smooth by construction (integration splits at coefficient
    // breakpoints); keep stage samples strictly inside so a one-sided
    // discontinuity at a segment endpoint is never picked up.
    const double nudge = std::min(0.25 * len, 1e-12 * (1.0 + std::max(std::abs(t0), std::abs(t1))));
    const double lo = t0 + nudge, hi = t1 - nudge;
    auto f = [&](double t, const State<N>& yy, State<N>& dy) {
        raw_rhs(std::min(std::max(t, lo), hi), yy, dy);
    };
    State<N> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;

    f(t0, y, k1);
    double fmag = 0.0, ymag = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        fmag = std::max(fmag, std::abs(k1[i]));
        ymag = std::max(ymag, std::abs(y[i]));
    }
    double h = std::min(len, 0.1 * (1.0 + ymag) / (1.0 + fmag));
    h = std::max(h, len * 1e-10);

    double t = t0;
    double err_old = 1e-4;
    bool k1_fresh = true;
    long steps = 0;
    const long max_steps = 50'000'000;

    while (t < t1) {
        if (++steps > max_steps)
            throw NumericError("ode: step budget exhausted near t = " + std::to_string(t));
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw NumericError("ode: step-size underflow at t = " + std::to_string(t));
        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }

        if (!k1_fresh) f(t, y, k1);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a21 * k1[i]);
        f(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + h, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                e7 * k7[i]);
            const double sc =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(e) / sc);
        }

        if (err <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;
            k1_fresh = true;
            if (!finite(y))
                throw NumericError("ode: non-finite state at t = " + std::to_string(t));
            const double e = std::max(err, 1e-10);
            double scale = 0.9 * std::pow(e, -0.2) * std::pow(err_old, 0.08);
            scale = std::clamp(scale, 0.2, 6.0);
            err_old = e;
            if (!last) h *= scale;
        } else {
            const double scale = std::max(0.9 * std::pow(err, -0.2), 0.2);
            h *= scale;
            k1_fresh = (k1_fresh && true); // k1 still valid at unchanged t
        }
    }
    return y;
}

/// Integrate over [t0, t1] splitting at the given sorted interior points
/// (coefficient breakpoints). Points outside (t0, t1) are ignored.
template <std::size_t N, class Rhs>
State<N> integrate(Rhs&& f, State<N> y, double t0, double t1, const OdeOptions& opt,
                   std::span<const double> splits = {}) {
    double a = t0;
    for (double s : splits) {
        if (s <= a || s >= t1) continue;
        y = integrate_segment(f, y, a, s, opt);
        a = s;
    }
    return integrate_segment(f, y, a, t1, opt);
}

} // namespace slspec

#endif
