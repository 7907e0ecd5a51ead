#ifndef SLSPEC_QUADRATURE_HPP
#define SLSPEC_QUADRATURE_HPP

#include <functional>
#include <span>

namespace slspec {

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_depth = 60;
};

/// Adaptive Gauss-Kronrod (G7,K15) quadrature of f over [a, b], splitting
/// first at the given sorted interior breakpoints. Throws NumericError on a
/// non-finite integrand sample.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    const QuadOptions& opt = {}, std::span<const double> splits = {});

} // namespace slspec

#endif
