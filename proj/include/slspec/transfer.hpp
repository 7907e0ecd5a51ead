#ifndef SLSPEC_TRANSFER_HPP
#define SLSPEC_TRANSFER_HPP

#include <array>
#include <span>
#include <vector>

#include "slspec/coefficients.hpp"
#include "slspec/mat2.hpp"

namespace slspec {

/// State convention for 2-vectors and transfer matrices.
/// DPrime propagates (u, u') and has det T(t) = p(0)/p(t);
/// PDPrime propagates (u, p u') and has det T identically 1.
enum class Frame { DPrime, PDPrime };

/// Sampled solution of the eigenvalue equation along a time grid. The true
/// vector at grid[i] is values[i] * exp(log_scale[i]); log_scale is nonzero
/// only when renormalization was needed to stay inside double range.
struct SolutionTrace {
    std::vector<double> grid;
    std::vector<std::array<cplx, 2>> values;
    std::vector<double> log_scale;
    cplx z;
    Frame frame = Frame::DPrime;
};

/// T(t1; z) T(t0; z)^{-1} for the (modulated) family coefficients, by
/// adaptive Runge-Kutta on the matrix ODE with initial value Id at t0.
Mat2 transfer_matrix(const SLParams& params, double t0, double t1, cplx z, Frame frame,
                     double tol = 1e-10);

/// Monodromy matrix: transfer matrix of the periodic-limit coefficients over
/// one period [0, omega].
Mat2 monodromy(const SLParams& params, cplx z, Frame frame, double tol = 1e-10);

/// d/dz of the monodromy matrix via the variational system integrated
/// alongside the matrix ODE (8 complex components).
Mat2 monodromy_dz(const SLParams& params, cplx z, Frame frame, double tol = 1e-10);

/// Like monodromy/monodromy_dz but over [0, t] of the periodic limit.
Mat2 limit_transfer(const SLParams& params, double t, cplx z, Frame frame, double tol = 1e-10);

/// Solution with initial data eta sampled on an increasing grid starting at 0.
SolutionTrace propagate(const SLParams& params, const BoundaryVector& eta,
                        std::span<const double> t_grid, cplx z, Frame frame, double tol = 1e-10);

/// Period-shift matrix X_n(t; z) = T(t + (n+1) omega) T(t + n omega)^{-1},
/// computed by direct integration over [t + n omega, t + (n+1) omega].
Mat2 shift_matrix_Xn(const SLParams& params, int n, double t, cplx z, Frame frame,
                     double tol = 1e-10);

namespace detail {
/// Converts a PDPrime-frame propagator over [t0, t1] into the requested
/// frame; p0/p1 are the values of p at the endpoint times.
Mat2 from_pd(const Mat2& t_pd, Frame frame, double p0, double p1);
/// One-period PDPrime propagator of the modulated coefficients.
Mat2 pd_transfer(const SLParams& params, bool use_limit, double t0, double t1, cplx z, double tol);
} // namespace detail

} // namespace slspec

#endif
