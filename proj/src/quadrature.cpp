#include "slspec/quadrature.hpp"

#include <cmath>
#include <string>

#include "slspec/errors.hpp"

namespace slspec {

namespace {

// QUADPACK dqk15 nodes and weights on [-1, 1].
constexpr double xgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                           0.741531185599394, 0.586087235467691, 0.405845151377397,
                           0.207784955007898, 0.0};
constexpr double wgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                           0.140653259715525, 0.169004726639267, 0.190350578064785,
                           0.204432940075298, 0.209482141084728};
constexpr double wg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                          0.417959183673469};

struct GkResult {
    double kronrod;
    double err;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    if (!std::isfinite(fc))
        throw NumericError("quadrature: non-finite integrand sample at t = " + std::to_string(c));

    double kron = wgk[7] * fc;
    double gauss = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = h * xgk[j];
        const double f1 = f(c - x);
        const double f2 = f(c + x);
        if (!std::isfinite(f1) || !std::isfinite(f2))
            throw NumericError("quadrature: non-finite integrand sample near t = " +
                               std::to_string(c));
        kron += wgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += wg[j / 2] * (f1 + f2);
    }
    kron *= h;
    gauss *= h;
    return {kron, std::abs(kron - gauss)};
}

double adapt(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt,
             int depth) {
    const GkResult r = gk15(f, a, b);
    if (r.err <= opt.rel_tol * std::abs(r.kronrod) + opt.abs_tol || depth >= opt.max_depth)
        return r.kronrod;
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, opt, depth + 1) + adapt(f, m, b, opt, depth + 1);
}

} // namespace

double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    const QuadOptions& opt, std::span<const double> splits) {
    if (b <= a) return 0.0;
    double total = 0.0;
    double lo = a;
    for (double s : splits) {
        if (s <= lo || s >= b) continue;
        total += adapt(f, lo, s, opt, 0);
        lo = s;
    }
    total += adapt(f, lo, b, opt, 0);
    return total;
}

} // namespace slspec
