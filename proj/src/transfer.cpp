#include "slspec/transfer.hpp"

#include <cmath>

#include "slspec/ode.hpp"

namespace slspec {

namespace {

struct CoeffRefs {
    const CoefficientFn& p;
    const CoefficientFn& q;
    const CoefficientFn& w;
};

CoeffRefs coeffs(const SLParams& params, bool use_limit) {
    if (use_limit) return {params.limit.p, params.limit.q, params.limit.w};
    return {params.p, params.q, params.w};
}

std::vector<double> splits(const SLParams& params, bool use_limit, double t0, double t1) {
    return use_limit ? params.limit_split_points(t0, t1) : params.split_points(t0, t1);
}

// (u, pu')' = [[0, 1/p], [q - z w, 0]] (u, pu')
struct MatrixRhs {
    CoeffRefs c;
    cplx z;
    void operator()(double t, const State<4>& y, State<4>& dy) const {
        const double pinv = 1.0 / c.p(t);
        const cplx g = c.q(t) - z * c.w(t);
        dy[0] = pinv * y[2];
        dy[1] = pinv * y[3];
        dy[2] = g * y[0];
        dy[3] = g * y[1];
    }
};

// Matrix ODE augmented with S' = b S + (d_z b) T, S(t0) = 0.
struct VariationalRhs {
    CoeffRefs c;
    cplx z;
    void operator()(double t, const State<8>& y, State<8>& dy) const {
        const double pinv = 1.0 / c.p(t);
        const double wt = c.w(t);
        const cplx g = c.q(t) - z * wt;
        dy[0] = pinv * y[2];
        dy[1] = pinv * y[3];
        dy[2] = g * y[0];
        dy[3] = g * y[1];
        dy[4] = pinv * y[6];
        dy[5] = pinv * y[7];
        dy[6] = g * y[4] - wt * y[0];
        dy[7] = g * y[5] - wt * y[1];
    }
};

struct VectorRhs {
    CoeffRefs c;
    cplx z;
    void operator()(double t, const State<2>& y, State<2>& dy) const {
        dy[0] = y[1] / c.p(t);
        dy[1] = (c.q(t) - z * c.w(t)) * y[0];
    }
};

Mat2 to_mat(const State<4>& y) { return {y[0], y[1], y[2], y[3]}; }

} // namespace

namespace detail {

Mat2 from_pd(const Mat2& t_pd, Frame frame, double p0, double p1) {
    if (frame == Frame::PDPrime) return t_pd;
    // diag(1, 1/p(t1)) * T_pd * diag(1, p(t0))
    return {t_pd.a11, t_pd.a12 * p0, t_pd.a21 / p1, t_pd.a22 * p0 / p1};
}

Mat2 pd_transfer(const SLParams& params, bool use_limit, double t0, double t1, cplx z,
                 double tol) {
    const auto c = coeffs(params, use_limit);
    State<4> y{1.0, 0.0, 0.0, 1.0};
    OdeOptions opt{tol, 1e-14};
    y = integrate(MatrixRhs{c, z}, y, t0, t1, opt, splits(params, use_limit, t0, t1));
    return to_mat(y);
}

} // namespace detail

Mat2 transfer_matrix(const SLParams& params, double t0, double t1, cplx z, Frame frame,
                     double tol) {
    if (!(0.0 <= t0 && t0 <= t1)) throw DomainError("transfer_matrix: need 0 <= t0 <= t1");
    const Mat2 t_pd = detail::pd_transfer(params, false, t0, t1, z, tol);
    return detail::from_pd(t_pd, frame, params.p(t0), params.p(t1));
}

Mat2 limit_transfer(const SLParams& params, double t, cplx z, Frame frame, double tol) {
    const Mat2 t_pd = detail::pd_transfer(params, true, 0.0, t, z, tol);
    return detail::from_pd(t_pd, frame, params.limit.p(0.0), params.limit.p(t));
}

Mat2 monodromy(const SLParams& params, cplx z, Frame frame, double tol) {
    return limit_transfer(params, params.omega, z, frame, tol);
}

Mat2 monodromy_dz(const SLParams& params, cplx z, Frame frame, double tol) {
    const auto c = coeffs(params, true);
    State<8> y{};
    y[0] = 1.0;
    y[3] = 1.0;
    OdeOptions opt{tol, 1e-14};
    y = integrate(VariationalRhs{c, z}, y, 0.0, params.omega, opt,
                  params.limit_split_points(0.0, params.omega));
    const Mat2 s_pd{y[4], y[5], y[6], y[7]};
    // p does not depend on z, so the frame conversion applies unchanged.
    return detail::from_pd(s_pd, frame, params.limit.p(0.0), params.limit.p(params.omega));
}

SolutionTrace propagate(const SLParams& params, const BoundaryVector& eta,
                        std::span<const double> t_grid, cplx z, Frame frame, double tol) {
    if (t_grid.empty()) throw DomainError("propagate: empty grid");
    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
        if (!(t_grid[i] < t_grid[i + 1])) throw DomainError("propagate: grid must be increasing");
    if (t_grid.front() < 0.0) throw DomainError("propagate: grid must start at t >= 0");

    const auto c = coeffs(params, false);
    const auto s0 = eta.pd_state(params.p(0.0));
    State<2> y{s0[0], s0[1]};
    OdeOptions opt{tol, 1e-14};

    SolutionTrace trace;
    trace.z = z;
    trace.frame = frame;
    double log_scale = 0.0;
    double prev = 0.0;
    for (double t : t_grid) {
        if (t > prev) {
            y = integrate(VectorRhs{c, z}, y, prev, t, opt, params.split_points(prev, t));
            prev = t;
        }
        const double mag = std::max(std::abs(y[0]), std::abs(y[1]));
        if (mag > 1e250 || (mag > 0.0 && mag < 1e-250)) {
            y[0] /= mag;
            y[1] /= mag;
            log_scale += std::log(mag);
        }
        std::array<cplx, 2> v{y[0], y[1]};
        if (frame == Frame::DPrime) v[1] /= params.p(t);
        trace.grid.push_back(t);
        trace.values.push_back(v);
        trace.log_scale.push_back(log_scale);
    }
    return trace;
}

Mat2 shift_matrix_Xn(const SLParams& params, int n, double t, cplx z, Frame frame, double tol) {
    if (n < 0) throw DomainError("shift_matrix_Xn: n must be >= 0");
    const double a = t + static_cast<double>(n) * params.omega;
    const double b = a + params.omega;
    const Mat2 x_pd = detail::pd_transfer(params, false, a, b, z, tol);
    return detail::from_pd(x_pd, frame, params.p(a), params.p(b));
}

} // namespace slspec
