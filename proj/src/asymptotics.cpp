#include "slspec/asymptotics.hpp"

#include <cmath>

#include "slspec/ode.hpp"

namespace slspec {

namespace detail {

namespace {

// Joint state: shift-matrix columns (4, restarted at Id each period) and the
// carried solution 2-vector, all in the PDPrime frame.
struct JointRhs {
    const SLParams& pr;
    cplx z;
    void operator()(double t, const State<6>& y, State<6>& dy) const {
        const double pinv = 1.0 / pr.p(t);
        const cplx g = pr.q(t) - z * pr.w(t);
        dy[0] = pinv * y[2];
        dy[1] = pinv * y[3];
        dy[2] = g * y[0];
        dy[3] = g * y[1];
        dy[4] = pinv * y[5];
        dy[5] = g * y[4];
    }
};

struct VecRhs {
    const SLParams& pr;
    cplx z;
    void operator()(double t, const State<2>& y, State<2>& dy) const {
        dy[0] = y[1] / pr.p(t);
        dy[1] = (pr.q(t) - z * pr.w(t)) * y[0];
    }
};

} // namespace

PeriodScan scan_periods(const SLParams& params, const BoundaryVector& eta, double t, cplx z,
                        int count, double tol) {
    if (count < 1) throw DomainError("scan_periods: count must be >= 1");
    const double omega = params.omega;
    PeriodScan out;
    out.shift_frame = params.kind == ModulationKind::PeriodicallyModulated ? Frame::DPrime
                                                                           : Frame::PDPrime;
    out.shift.reserve(static_cast<std::size_t>(count));
    out.shift_pd.reserve(static_cast<std::size_t>(count));
    out.samples.reserve(static_cast<std::size_t>(count) + 1);
    out.p_at.reserve(static_cast<std::size_t>(count) + 1);

    OdeOptions opt{tol, 1e-14};
    const auto s0 = eta.pd_state(params.p(0.0));
    State<2> u{s0[0], s0[1]};
    if (t > 0.0) u = integrate(VecRhs{params, z}, u, 0.0, t, opt, params.split_points(0.0, t));

    double log_scale = 0.0;
    out.samples.push_back({u[0], u[1], log_scale});
    out.p_at.push_back(params.p(t));

    for (int k = 0; k < count; ++k) {
        const double a = t + static_cast<double>(k) * omega;
        const double b = a + omega;
        State<6> y{1.0, 0.0, 0.0, 1.0, u[0], u[1]};
        y = integrate(JointRhs{params, z}, y, a, b, opt, params.split_points(a, b));
        const Mat2 x_pd{y[0], y[1], y[2], y[3]};
        out.shift_pd.push_back(x_pd);
        out.shift.push_back(from_pd(x_pd, out.shift_frame, params.p(a), params.p(b)));
        u = {y[4], y[5]};
        const double mag = std::max(std::abs(u[0]), std::abs(u[1]));
        if (mag > 1e250 || (mag > 0.0 && mag < 1e-250)) {
            u[0] /= mag;
            u[1] /= mag;
            log_scale += std::log(mag);
        }
        out.samples.push_back({u[0], u[1], log_scale});
        out.p_at.push_back(params.p(b));
    }
    return out;
}

} // namespace detail

SolutionSeq solution_seq(const SLParams& params, const BoundaryVector& eta, double t, cplx z,
                         int n_max, double tol) {
    if (n_max < 1) throw DomainError("solution_seq: n_max must be >= 1");
    const auto scan = detail::scan_periods(params, eta, t, z, n_max, tol);
    SolutionSeq seq;
    seq.t = t;
    seq.eta = eta;
    seq.z = z;
    seq.frame = scan.shift_frame;
    seq.entries.reserve(scan.samples.size());
    for (std::size_t n = 0; n < scan.samples.size(); ++n) {
        auto e = scan.samples[n];
        if (seq.frame == Frame::DPrime) e.du /= scan.p_at[n];
        seq.entries.push_back(e);
    }
    return seq;
}

TuranSeq turan_seq(const SLParams& params, const BoundaryVector& eta, double t, cplx z, int n_max,
                   double tol) {
    if (n_max < 1) throw DomainError("turan_seq: n_max must be >= 1");
    const auto scan = detail::scan_periods(params, eta, t, z, n_max, tol);
    const bool modulated = params.kind != ModulationKind::AsymptoticallyPeriodic;
    TuranSeq out;
    out.t = t;
    out.z = z;
    out.values.reserve(static_cast<std::size_t>(n_max));
    for (int n = 0; n < n_max; ++n) {
        const auto& a = scan.samples[static_cast<std::size_t>(n)];
        const auto& b = scan.samples[static_cast<std::size_t>(n) + 1];
        // p_n D_n = u_{n+1} (pu')_n - u_n (pu')_{n+1} p_n / p_{n+1}
        cplx det;
        if (modulated) {
            const double ratio = scan.p_at[static_cast<std::size_t>(n)] /
                                 scan.p_at[static_cast<std::size_t>(n) + 1];
            det = b.u * a.du - a.u * b.du * ratio;
        } else {
            det = b.u * a.du - a.u * b.du;
        }
        out.values.push_back(std::abs(det) * std::exp(a.log_scale + b.log_scale));
    }
    out.tail_estimate = out.values.back();
    out.last_increment = out.values.size() > 1
                             ? std::abs(out.values.back() - out.values[out.values.size() - 2])
                             : 0.0;
    return out;
}

namespace {

struct Ellipse {
    double theta;
    double log_abs_plus;
    cplx lambda_minus;
    double sqrt_neg_discr;
};

Ellipse elliptic_data(const Mat2& x, int k) {
    const double tr = x.trace().real();
    const double det = x.det().real();
    const double dsc = tr * tr - 4.0 * det;
    if (!(dsc < 0.0))
        throw NumericError("non-elliptic shift matrix at k = " + std::to_string(k));
    const double root = std::sqrt(-dsc);
    Ellipse e;
    e.theta = std::acos(std::clamp(tr / (2.0 * std::sqrt(det)), -1.0, 1.0));
    e.log_abs_plus = 0.5 * std::log(det); // |lambda+|^2 = det for real elliptic X
    e.lambda_minus = cplx(tr / 2.0, -root / 2.0);
    e.sqrt_neg_discr = root;
    return e;
}

} // namespace

std::vector<double> theta_phases(const SLParams& params, double t, double z, int n_lo, int n_hi,
                                 double tol) {
    if (!(0 <= n_lo && n_lo < n_hi)) throw DomainError("theta_phases: need 0 <= n_lo < n_hi");
    const auto scan =
        detail::scan_periods(params, BoundaryVector::dirichlet(), t, cplx(z, 0.0), n_hi, tol);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_hi - n_lo));
    for (int k = n_lo; k < n_hi; ++k)
        out.push_back(elliptic_data(scan.shift[static_cast<std::size_t>(k)], k).theta);
    return out;
}

PhiEstimate phi_estimate(const SLParams& params, const BoundaryVector& eta, double t, double z,
                         int n_max, double tol, double vanish_floor) {
    if (n_max < 8) throw DomainError("phi_estimate: n_max too small");
    const auto scan = detail::scan_periods(params, eta, t, cplx(z, 0.0), n_max, tol);

    PhiEstimate out;
    out.delta = 1e-3;
    int m = -1;
    for (int k = 0; k < n_max; ++k) {
        const Mat2& x = scan.shift[static_cast<std::size_t>(k)];
        if (x.discr().real() < -out.delta && std::abs(x.a12) > out.delta) {
            m = k;
            break;
        }
    }
    if (m < 0 || m > n_max / 2)
        throw NumericError("phi_estimate: no stable elliptic start index found");
    out.m_start = m;

    // Running products over k = M..n-1 and the per-n scaled samples.
    std::vector<double> log_prod(static_cast<std::size_t>(n_max) + 1, 0.0);
    std::vector<double> phase(static_cast<std::size_t>(n_max) + 1, 0.0);
    std::vector<Ellipse> ell(static_cast<std::size_t>(n_max));
    for (int k = m; k < n_max; ++k) {
        ell[static_cast<std::size_t>(k)] = elliptic_data(scan.shift[static_cast<std::size_t>(k)], k);
        log_prod[static_cast<std::size_t>(k) + 1] =
            log_prod[static_cast<std::size_t>(k)] + ell[static_cast<std::size_t>(k)].log_abs_plus;
        phase[static_cast<std::size_t>(k) + 1] =
            phase[static_cast<std::size_t>(k)] + ell[static_cast<std::size_t>(k)].theta;
    }

    auto u_at = [&](int n) {
        const auto& e = scan.samples[static_cast<std::size_t>(n)];
        return e.u.real() * std::exp(e.log_scale);
    };
    out.scaled_u.reserve(static_cast<std::size_t>(n_max - m) + 1);
    out.phase.reserve(static_cast<std::size_t>(n_max - m) + 1);
    for (int n = m; n <= n_max; ++n) {
        out.scaled_u.push_back(u_at(n) / std::exp(log_prod[static_cast<std::size_t>(n)]));
        out.phase.push_back(phase[static_cast<std::size_t>(n)]);
    }

    auto phi_at = [&](int n) {
        const cplx numerator =
            u_at(n + 1) - ell[static_cast<std::size_t>(n)].lambda_minus * u_at(n);
        const cplx rot = std::polar(1.0, -phase[static_cast<std::size_t>(n)]);
        return numerator * rot / std::exp(log_prod[static_cast<std::size_t>(n)]);
    };
    out.phi = phi_at(n_max - 1);

    // No branch jumps allowed across the last indices.
    cplx prev = phi_at(n_max - 10);
    for (int n = n_max - 9; n < n_max; ++n) {
        const cplx cur = phi_at(n);
        double jump = std::abs(std::arg(cur) - std::arg(prev));
        jump = std::min(jump, 2.0 * M_PI - jump);
        if (jump > M_PI / 2.0)
            throw NumericError("phi_estimate: branch jump in arg(phi) at n = " + std::to_string(n));
        prev = cur;
    }

    const Mat2 mono = monodromy(params, 0.0, Frame::PDPrime, tol);
    const double tr = mono.trace().real();
    out.theta_inf = std::acos(std::clamp(tr / 2.0, -1.0, 1.0));
    out.amplitude = 2.0 * std::abs(out.phi) / std::sqrt(std::max(4.0 - tr * tr, 1e-300));
    out.possibly_vanishing = std::abs(out.phi) < vanish_floor;

    double res = 0.0;
    for (int n = n_max - 10; n <= n_max; ++n) {
        const double pred = 2.0 * std::abs(out.phi) /
                            ell[static_cast<std::size_t>(std::min(n, n_max - 1))].sqrt_neg_discr *
                            std::sin(phase[static_cast<std::size_t>(n)] + std::arg(out.phi));
        res = std::max(res,
                       std::abs(out.scaled_u[static_cast<std::size_t>(n - m)] - pred));
    }
    out.residual_sup = res;
    return out;
}

MinimalSolution minimal_solution(const SLParams& params, cplx z, int n_max, double tol) {
    if (n_max < 2) throw DomainError("minimal_solution: n_max must be >= 2");
    if (std::abs(z.imag()) == 0.0) {
        // Shift matrices converge to the monodromy at 0 for modulated
        // families and to the monodromy at z itself otherwise.
        const cplx z_eff =
            params.kind == ModulationKind::PeriodicallyModulated ? cplx(0.0) : z;
        const double tr = monodromy(params, z_eff, Frame::PDPrime, tol).trace().real();
        if (std::abs(tr) < 2.0 - 1e-6)
            throw DomainError("minimal_solution: no minimal solution at real z in Case I");
        if (std::abs(tr) <= 2.0 + 1e-6)
            throw DomainError("minimal_solution: monodromy at the critical boundary");
    }

    const int buffer = 20;
    const int total = n_max + buffer;
    const auto scan =
        detail::scan_periods(params, BoundaryVector::dirichlet(), 0.0, z, total, tol);

    // Work in the PDPrime frame: det X = 1, eigenvalues form a reciprocal pair.
    auto lam_minus_of = [&](int k) {
        const EigenPair ev = eigen_pm(scan.shift_pd[static_cast<std::size_t>(k)]);
        return std::abs(ev.minus) <= std::abs(ev.plus) ? ev.minus : ev.plus;
    };

    // Seed with the lambda^- eigenvector of the deepest shift matrix.
    const Mat2& x_seed = scan.shift_pd[static_cast<std::size_t>(total - 1)];
    const cplx lm_seed = lam_minus_of(total - 1);
    std::array<cplx, 2> v{x_seed.a12, lm_seed - x_seed.a11};
    {
        const double nv = std::hypot(std::abs(v[0]), std::abs(v[1]));
        if (nv == 0.0) throw NumericError("minimal_solution: degenerate eigenvector seed");
        v[0] /= nv;
        v[1] /= nv;
    }

    std::vector<std::array<cplx, 2>> states(static_cast<std::size_t>(total) + 1);
    std::vector<double> logs(static_cast<std::size_t>(total) + 1, 0.0);
    states[static_cast<std::size_t>(total)] = v;
    double log_scale = 0.0;
    for (int k = total - 1; k >= 0; --k) {
        const Mat2 inv = scan.shift_pd[static_cast<std::size_t>(k)].inverse();
        v = inv.apply(v);
        const double mag = std::max(std::abs(v[0]), std::abs(v[1]));
        v[0] /= mag;
        v[1] /= mag;
        log_scale += std::log(mag);
        states[static_cast<std::size_t>(k)] = v;
        logs[static_cast<std::size_t>(k)] = log_scale;
    }

    MinimalSolution out;
    out.m_start = 0;
    out.trace.z = z;
    out.trace.frame = Frame::PDPrime;
    // Normalize so the state at t = 0 has log_scale 0 and unit norm.
    const double base = logs[0];
    for (int k = 0; k <= n_max; ++k) {
        out.trace.grid.push_back(static_cast<double>(k) * params.omega);
        out.trace.values.push_back(states[static_cast<std::size_t>(k)]);
        out.trace.log_scale.push_back(logs[static_cast<std::size_t>(k)] - base);
    }

    double acc = 0.0;
    int used = 0;
    for (int k = 0; k < n_max; ++k) {
        const double f = std::abs(lam_minus_of(k));
        out.per_period_factors.push_back(f);
        if (k >= n_max / 2) {
            acc += std::log(f);
            ++used;
        }
    }
    out.decay_log_rate = acc / std::max(used, 1);
    out.decay_factor = std::exp(out.decay_log_rate);
    return out;
}

} // namespace slspec
