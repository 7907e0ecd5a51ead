#ifndef SLSPEC_COEFFICIENTS_HPP
#define SLSPEC_COEFFICIENTS_HPP

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "slspec/errors.hpp"

namespace slspec {

/// A scalar coefficient of the differential expression, evaluable everywhere
/// on [0, inf). Breakpoints mark kink/jump offsets within one period.
struct CoefficientFn {
    std::function<double(double)> eval;
    std::vector<double> breakpoints; // strictly increasing, in [0, omega)
    enum class Smoothness { Smooth, PiecewiseSmooth } smoothness = Smoothness::Smooth;

    double operator()(double t) const {
        const double v = eval(t);
        if (!std::isfinite(v))
            throw NumericError("non-finite coefficient sample at t = " + std::to_string(t));
        return v;
    }
};

enum class ModulationKind { ExactlyPeriodic, PeriodicallyModulated, AsymptoticallyPeriodic };

/// The omega-periodic limit triple together with the derivative of its
/// leading coefficient.
struct PeriodicTriple {
    CoefficientFn p, p_prime, q, w;
};

/// Evaluable Sturm-Liouville parameter family (p, q, w) with exact p', its
/// periodic limit triple and the declared modulation kind. Immutable after
/// construction; evaluation is pure and reentrant.
struct SLParams {
    CoefficientFn p, p_prime, q, w;
    double omega = 0.0;
    PeriodicTriple limit;
    ModulationKind kind = ModulationKind::ExactlyPeriodic;

    std::string family;                    // builtin family identifier
    std::map<std::string, double> params;  // named construction parameters

    /// Interior split points for integration over [t0, t1]: all coefficient
    /// breakpoints lifted by multiples of the period.
    std::vector<double> split_points(double t0, double t1) const;
    /// Same for the periodic-limit coefficients.
    std::vector<double> limit_split_points(double t0, double t1) const;
};

/// Initial data (u(0), u'(0)) or (u(0), p(0)u'(0)) depending on the frame.
/// Stilde declares |e1|^2 + |p(0) e2|^2 = 1 with (e1, e2) = (u, u')(0);
/// S1 declares e1^2 + e2^2 = 1 with (e1, e2) = (u, p u')(0).
struct BoundaryVector {
    double e1 = 0.0;
    double e2 = 1.0;
    enum class Frame { Stilde, S1 } frame = Frame::S1;

    /// Initial (u(0), p(0) u'(0)) state.
    std::array<double, 2> pd_state(double p0) const {
        if (frame == Frame::Stilde) return {e1, p0 * e2};
        return {e1, e2};
    }
    /// |declared norm - 1|.
    double norm_defect(double p0) const {
        const auto s = pd_state(p0);
        return std::abs(std::sqrt(s[0] * s[0] + s[1] * s[1]) - 1.0);
    }

    static BoundaryVector dirichlet() { return {0.0, 1.0, Frame::S1}; }
    static BoundaryVector neumann() { return {1.0, 0.0, Frame::S1}; }
};

/**
 * Builds one of the builtin parameter families.
 *
 * Names and their required parameters:
 *   free                 omega
 *   constant-q           q0, omega
 *   example2             kappa in (0,1], c, omega
 *   example5             a, b in (0,1), omega (optional c, default 0)
 *   appendix-asymptotic  omega
 *
 * The periodic driver used by example2/example5 is -c + sin(2 pi t / omega).
 */
SLParams make_family(const std::string& name, const std::map<std::string, double>& params);

} // namespace slspec

#endif
