#include "slspec/diagnostics.hpp"

#include <cmath>
#include <functional>

#include "slspec/quadrature.hpp"

namespace slspec {

double carleman_rho(const SLParams& params, double L, double tol) {
    if (!(L > 0.0)) throw DomainError("carleman_rho: L must be positive");
    std::function<double(double)> f;
    if (params.kind == ModulationKind::AsymptoticallyPeriodic)
        f = [&](double t) { return params.w(t); };
    else
        f = [&](double t) { return params.w(t) / params.p(t); };
    QuadOptions opt;
    opt.rel_tol = tol;
    return integrate_gk(f, 0.0, L, opt, params.split_points(0.0, L));
}

namespace {

std::function<double(double)> selector_fn(const SLParams& pr, StolzSelector sel) {
    switch (sel) {
        case StolzSelector::QoverP:
            return [&pr](double t) { return pr.q(t) / pr.p(t); };
        case StolzSelector::WoverP:
            return [&pr](double t) { return pr.w(t) / pr.p(t); };
        case StolzSelector::PprimeOverP:
            return [&pr](double t) { return pr.p_prime(t) / pr.p(t); };
        case StolzSelector::Q:
            return [&pr](double t) { return pr.q(t); };
        case StolzSelector::W:
            return [&pr](double t) { return pr.w(t); };
        case StolzSelector::OneOverP:
            return [&pr](double t) { return 1.0 / pr.p(t); };
    }
    throw DomainError("stolz_defect: bad selector");
}

} // namespace

std::vector<double> stolz_defect(const SLParams& params, StolzSelector sel, int n_max,
                                 double tol) {
    if (n_max < 1) throw DomainError("stolz_defect: n_max must be >= 1");
    const auto f = selector_fn(params, sel);
    const double omega = params.omega;
    QuadOptions opt;
    opt.rel_tol = tol;
    std::vector<double> sums;
    sums.reserve(static_cast<std::size_t>(n_max));
    double acc = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double base = static_cast<double>(n) * omega;
        auto increment = [&](double s) { return std::abs(f(base + s + omega) - f(base + s)); };
        const auto splits = params.split_points(0.0, omega); // same offsets each period
        acc += integrate_gk(increment, 0.0, omega, opt, splits);
        sums.push_back(acc);
    }
    return sums;
}

double liouville_potential(const SLParams& params, double x) {
    if (params.family != "example2")
        throw DomainError("liouville_potential: family is not example2");
    const double kappa = params.params.at("kappa");
    double t;
    if (kappa < 1.0)
        t = std::pow(1.0 + x, 1.0 / (1.0 - kappa)) - 1.0;
    else
        t = std::exp(x) - 1.0;
    return std::pow(1.0 + t, 2.0 * kappa) * params.limit.q(t);
}

} // namespace slspec
