#include "slspec/density.hpp"

#include <algorithm>
#include <cmath>

#include "slspec/ode.hpp"
#include "slspec/quadrature.hpp"
#include "slspec/diagnostics.hpp"

namespace slspec {

namespace {

bool modulated_frame(const SLParams& params) {
    return params.kind == ModulationKind::PeriodicallyModulated;
}

// Solution 2-vector plus accumulators for K_L and rho_L.
struct KernelRhs {
    const SLParams& pr;
    cplx z;
    bool rho_over_p;
    void operator()(double t, const State<4>& y, State<4>& dy) const {
        const double p = pr.p(t);
        const double w = pr.w(t);
        dy[0] = y[1] / p;
        dy[1] = (pr.q(t) - z * w) * y[0];
        dy[2] = std::norm(y[0]) * w;
        dy[3] = rho_over_p ? w / p : w;
    }
};

struct CauchyRhs {
    const SLParams& pr;
    cplx z;
    void operator()(double t, const State<4>& y, State<4>& dy) const {
        const double p = pr.p(t);
        const double w = pr.w(t);
        const cplx g = pr.q(t) - z * w;
        dy[0] = y[1] / p;
        dy[1] = g * y[0];
        dy[2] = y[3] / p;
        dy[3] = g * y[2] - w * y[0];
    }
};

enum class BandPosition { Inside, Touching, GapEdge, Outside };

// Locates lambda relative to the bands of the periodic limit. Points where
// |tr| = 2 with both neighbors inside are touching edges of two bands (the
// density-of-states formulas extend continuously across them).
BandPosition band_position(const SLParams& params, double lambda, double tol) {
    auto tr_at = [&](double lam) {
        return monodromy(params, lam, Frame::PDPrime, tol).trace().real();
    };
    const double tr = tr_at(lambda);
    if (std::abs(tr) < 2.0 - 1e-7) return BandPosition::Inside;
    if (std::abs(tr) > 2.0 + 1e-7) return BandPosition::Outside;
    const double h = 1e-5 * std::max(1.0, std::abs(lambda));
    const bool left = std::abs(tr_at(lambda - h)) < 2.0;
    const bool right = std::abs(tr_at(lambda + h)) < 2.0;
    if (left && right) return BandPosition::Touching;
    return BandPosition::GapEdge;
}

void require_validity(const SLParams& params, double lambda, double tol) {
    if (modulated_frame(params)) {
        const CaseLabel label = classify(params, Frame::PDPrime, 1e-6, tol);
        if (label.tag != CaseLabel::Tag::I)
            throw DomainError("operation requires Case I (|tr| < 2 at z = 0); got Case " +
                              std::string(to_string(label.tag)));
        return;
    }
    const BandPosition pos = band_position(params, lambda, tol);
    if (pos != BandPosition::Inside && pos != BandPosition::Touching)
        throw DomainError("lambda = " + std::to_string(lambda) + " not in Lambda_-");
}

} // namespace

double dos_gamma(const SLParams& params, double tol) {
    QuadOptions opt;
    opt.rel_tol = tol;
    const auto splits = params.limit_split_points(0.0, params.omega);
    if (modulated_frame(params))
        return integrate_gk([&](double t) { return params.limit.w(t) / params.limit.p(t); }, 0.0,
                            params.omega, opt, splits);
    return integrate_gk([&](double t) { return params.limit.w(t); }, 0.0, params.omega, opt,
                        splits);
}

double cd_kernel_diag(const SLParams& params, const BoundaryVector& eta, double lambda, double L,
                      double tol) {
    if (!(L > 0.0)) throw DomainError("cd_kernel_diag: L must be positive");
    const auto s0 = eta.pd_state(params.p(0.0));
    State<4> y{s0[0], s0[1], 0.0, 0.0};
    OdeOptions opt{tol, 1e-14};
    y = integrate(KernelRhs{params, cplx(lambda, 0.0), modulated_frame(params)}, y, 0.0, L, opt,
                  params.split_points(0.0, L));
    return y[2].real();
}

GEstimate g_estimate(const SLParams& params, const BoundaryVector& eta, double lambda,
                     std::span<const double> L_schedule, double tol) {
    if (L_schedule.size() < 2) throw DomainError("g_estimate: schedule needs >= 2 points");
    for (std::size_t i = 0; i + 1 < L_schedule.size(); ++i)
        if (!(L_schedule[i] < L_schedule[i + 1]))
            throw DomainError("g_estimate: schedule must be increasing");
    require_validity(params, lambda, tol);

    const auto s0 = eta.pd_state(params.p(0.0));
    State<4> y{s0[0], s0[1], 0.0, 0.0};
    OdeOptions opt{tol, 1e-14};
    const KernelRhs rhs{params, cplx(lambda, 0.0), modulated_frame(params)};

    GEstimate out;
    out.samples.reserve(L_schedule.size());
    double prev = 0.0;
    for (double L : L_schedule) {
        y = integrate(rhs, y, prev, L, opt, params.split_points(prev, L));
        prev = L;
        const double K = y[2].real();
        const double rho = y[3].real();
        out.samples.push_back({L, K, rho, K / rho});
    }

    const std::size_t tail_start = out.samples.size() - std::max<std::size_t>(
                                       2, out.samples.size() / 4);
    double sum = 0.0, lo = 1e300, hi = -1e300;
    for (std::size_t i = tail_start; i < out.samples.size(); ++i) {
        const double r = out.samples[i].ratio;
        sum += r;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    out.g = sum / static_cast<double>(out.samples.size() - tail_start);
    out.error = 0.5 * (hi - lo);
    return out;
}

double dos_density(const SLParams& params, double lambda, double tol) {
    const double gamma = dos_gamma(params, tol);
    if (modulated_frame(params)) {
        require_validity(params, lambda, tol);
        const double tr_dz = monodromy_dz(params, 0.0, Frame::PDPrime, tol).trace().real();
        const double dsc = monodromy(params, 0.0, Frame::PDPrime, tol).discr().real();
        return std::abs(tr_dz) / (M_PI * gamma * std::sqrt(-dsc));
    }
    const BandPosition pos = band_position(params, lambda, tol);
    if (pos == BandPosition::Touching) {
        // At a closed gap both tr -+ 2 and d_z tr vanish; the 0/0 limit of the
        // density is sqrt(|d2_z tr| / 2) / (pi gamma).
        const double h = 1e-5 * std::max(1.0, std::abs(lambda));
        const double dp = monodromy_dz(params, lambda + h, Frame::PDPrime, tol).trace().real();
        const double dm = monodromy_dz(params, lambda - h, Frame::PDPrime, tol).trace().real();
        const double curvature = (dp - dm) / (2.0 * h);
        return std::sqrt(0.5 * std::abs(curvature)) / (M_PI * gamma);
    }
    if (pos != BandPosition::Inside)
        throw DomainError("dos_density: lambda = " + std::to_string(lambda) + " not in Lambda_-");
    const double tr = monodromy(params, lambda, Frame::PDPrime, tol).trace().real();
    const double tr_dz = monodromy_dz(params, lambda, Frame::PDPrime, tol).trace().real();
    return std::abs(tr_dz) / (M_PI * gamma * std::sqrt(4.0 - tr * tr));
}

double dos_mass(const SLParams& params, double a, double b, double tol) {
    if (!(a < b)) throw DomainError("dos_mass: need a < b");
    if (modulated_frame(params)) return dos_density(params, a, tol) * (b - a);

    // Integrate the lambda-dependent density over the bands inside (a, b),
    // with an endpoint-flattening substitution on each piece to absorb the
    // inverse-square-root edge singularities.
    const BandList list = bands(params, a, b, (b - a) / 400.0, 1e-10, tol);
    double total = 0.0;
    QuadOptions opt;
    opt.rel_tol = 1e-9;
    opt.abs_tol = 1e-12;
    opt.max_depth = 40;
    for (const auto& band : list.intervals) {
        const double mid = 0.5 * (band.lo + band.hi);
        const double half = 0.5 * (band.hi - band.lo);
        auto f = [&](double s) {
            const double lam = mid + half * std::sin(M_PI * (s - 0.5));
            const double jac = half * M_PI * std::cos(M_PI * (s - 0.5));
            return dos_density(params, lam, tol) * jac;
        };
        total += integrate_gk(f, 0.0, 1.0, opt);
    }
    return total;
}

DensityReport spectral_density(const SLParams& params, const BoundaryVector& eta, double lambda,
                               std::span<const double> L_schedule, double tol) {
    DensityReport report;
    report.lambda = lambda;
    report.kind = params.kind;
    const GEstimate ge = g_estimate(params, eta, lambda, L_schedule, tol);
    report.samples = ge.samples;
    report.g = ge.g;
    report.g_error = ge.error;
    report.dos = dos_density(params, lambda, tol);
    report.mu_prime = report.dos / report.g;
    return report;
}

namespace {

// Unwrapped phase of (u, p u') at time L: u = r sin(theta), p u' = r cos(theta),
// theta' = cos^2/p + (lambda w - q) sin^2. Zeros of u(L; .) sit at multiples
// of pi, crossed upward both in t and in lambda, which makes the zero count
// of a lambda-cell exact regardless of how tightly the zeros cluster.
double pruefer_phase(const SLParams& params, const std::array<double, 2>& s0, double L,
                     double lambda, double tol) {
    struct Rhs {
        const SLParams& pr;
        double lam;
        void operator()(double t, const State<1>& y, State<1>& dy) const {
            const double th = y[0].real();
            const double c = std::cos(th);
            const double s = std::sin(th);
            dy[0] = c * c / pr.p(t) + (lam * pr.w(t) - pr.q(t)) * s * s;
        }
    };
    State<1> y{cplx(std::atan2(s0[0], s0[1]), 0.0)};
    OdeOptions opt{tol, 1e-12};
    y = integrate(Rhs{params, lambda}, y, 0.0, L, opt, params.split_points(0.0, L));
    return y[0].real();
}

// floor(theta/pi) with a nudge so an eigenvalue sitting exactly on a window
// endpoint lands on the correct side of the half-open interval.
long pi_floor(double theta) { return static_cast<long>(std::floor(theta / M_PI + 1e-7)); }

} // namespace

int count_eigenvalues(const SLParams& params, const BoundaryVector& eta, double L, double a,
                      double b, double lambda_grid_step, double tol) {
    if (!(a < b)) throw DomainError("count_eigenvalues: need a < b");
    if (lambda_grid_step <= 0.0) {
        // Resolve the expected spacing ~ 1/(dos * rho_L) by >= 2 cells.
        double d;
        try {
            d = dos_density(params, 0.5 * (a + b), tol);
        } catch (const DomainError&) {
            d = 0.0;
        }
        const double rho = carleman_rho(params, L, tol);
        lambda_grid_step = d > 0.0 ? std::min(0.05, 0.5 / (d * rho)) : 0.05;
    }

    const auto s0 = eta.pd_state(params.p(0.0));
    auto phase = [&](double lam) { return pruefer_phase(params, s0, L, lam, tol); };

    const int n = std::max(2, static_cast<int>(std::ceil((b - a) / lambda_grid_step)));
    std::vector<double> lam(n + 1), theta(n + 1);
    for (int i = 0; i <= n; ++i) {
        lam[i] = a + (b - a) * static_cast<double>(i) / n;
        theta[i] = phase(lam[i]);
    }
    // The total count telescopes to the two window endpoints; evaluate those
    // tightly so an eigenvalue sitting exactly on the boundary of the
    // half-open window lands on the correct side.
    theta[0] = pruefer_phase(params, s0, L, a, std::min(tol, 1e-11));
    theta[n] = pruefer_phase(params, s0, L, b, std::min(tol, 1e-11));

    int count = 0;
    for (int i = 0; i < n; ++i) {
        const long k_lo = pi_floor(theta[i]);
        const long k_hi = pi_floor(theta[i + 1]);
        // Each multiple of pi crossed inside the cell is one simple zero of
        // u(L; .); locate it by bisection (the phase is monotone in lambda).
        for (long k = k_lo + 1; k <= k_hi; ++k) {
            const double target = static_cast<double>(k) * M_PI;
            double lo = lam[i], hi = lam[i + 1];
            double th_lo = theta[i];
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                const double th = phase(mid);
                if (th < target) {
                    lo = mid;
                    th_lo = th;
                } else {
                    hi = mid;
                }
            }
            (void)th_lo;
            ++count;
        }
    }
    return count;
}

CountTable dos_convergence(const SLParams& params, const BoundaryVector& eta, double a, double b,
                           std::span<const double> L_schedule, double tol) {
    if (L_schedule.empty()) throw DomainError("dos_convergence: empty schedule");
    CountTable table;
    table.target = dos_mass(params, a, b, std::min(tol, 1e-9));
    for (double L : L_schedule) {
        const int c = count_eigenvalues(params, eta, L, a, b, 0.0, tol);
        const double rho = carleman_rho(params, L, tol);
        table.rows.push_back({L, c, rho, static_cast<double>(c) / rho});
    }
    return table;
}

cplx cauchy_transform(const SLParams& params, const BoundaryVector& eta, double L, cplx z,
                      double tol) {
    if (z.imag() == 0.0) throw DomainError("cauchy_transform: Im z must be nonzero");
    const auto s0 = eta.pd_state(params.p(0.0));
    State<4> y{s0[0], s0[1], 0.0, 0.0};
    OdeOptions opt{tol, 1e-14};
    y = integrate(CauchyRhs{params, z}, y, 0.0, L, opt, params.split_points(0.0, L));
    if (std::abs(y[0]) == 0.0)
        throw NumericError("cauchy_transform: u(L) vanished; integration failure");
    return -y[2] / y[0];
}

} // namespace slspec
