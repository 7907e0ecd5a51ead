#include "slspec/coefficients.hpp"

#include <algorithm>
#include <cmath>

namespace slspec {

namespace {

std::vector<double> lift_breakpoints(const std::vector<double>& base, double omega, double t0,
                                     double t1) {
    std::vector<double> out;
    if (base.empty() || t1 <= t0) return out;
    const long k0 = static_cast<long>(std::floor(t0 / omega)) - 1;
    const long k1 = static_cast<long>(std::ceil(t1 / omega)) + 1;
    for (long k = k0; k <= k1; ++k)
        for (double b : base) {
            const double s = b + static_cast<double>(k) * omega;
            if (s > t0 && s < t1) out.push_back(s);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double require(const std::map<std::string, double>& m, const std::string& key,
               const std::string& family) {
    auto it = m.find(key);
    if (it == m.end())
        throw ConfigError("family '" + family + "' requires parameter '" + key + "'");
    return it->second;
}

double positive_omega(const std::map<std::string, double>& m, const std::string& family) {
    const double omega = require(m, "omega", family);
    if (!(omega > 0.0)) throw ConfigError("omega must be positive");
    return omega;
}

CoefficientFn constant(double v) {
    return {[v](double) { return v; }, {}, CoefficientFn::Smoothness::Smooth};
}

} // namespace

std::vector<double> SLParams::split_points(double t0, double t1) const {
    std::vector<double> base;
    for (const CoefficientFn* c : {&p, &p_prime, &q, &w})
        base.insert(base.end(), c->breakpoints.begin(), c->breakpoints.end());
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    return lift_breakpoints(base, omega, t0, t1);
}

std::vector<double> SLParams::limit_split_points(double t0, double t1) const {
    std::vector<double> base;
    for (const CoefficientFn* c : {&limit.p, &limit.p_prime, &limit.q, &limit.w})
        base.insert(base.end(), c->breakpoints.begin(), c->breakpoints.end());
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    return lift_breakpoints(base, omega, t0, t1);
}

SLParams make_family(const std::string& name, const std::map<std::string, double>& pars) {
    SLParams out;
    out.family = name;
    out.params = pars;

    if (name == "free") {
        out.omega = positive_omega(pars, name);
        out.p = constant(1.0);
        out.p_prime = constant(0.0);
        out.q = constant(0.0);
        out.w = constant(1.0);
        out.limit = {constant(1.0), constant(0.0), constant(0.0), constant(1.0)};
        out.kind = ModulationKind::ExactlyPeriodic;
        return out;
    }

    if (name == "constant-q") {
        out.omega = positive_omega(pars, name);
        const double q0 = require(pars, "q0", name);
        out.p = constant(1.0);
        out.p_prime = constant(0.0);
        out.q = constant(q0);
        out.w = constant(1.0);
        out.limit = {constant(1.0), constant(0.0), constant(q0), constant(1.0)};
        out.kind = ModulationKind::ExactlyPeriodic;
        return out;
    }

    if (name == "example2") {
        const double kappa = require(pars, "kappa", name);
        if (!(kappa > 0.0 && kappa <= 1.0)) throw ConfigError("kappa must lie in (0, 1]");
        const double c = require(pars, "c", name);
        const double omega = positive_omega(pars, name);
        out.omega = omega;

        const double ck = kappa < 1.0 ? 1.0 / (1.0 - kappa) : 1.0;
        const double ck2 = ck * ck;
        const double freq = 2.0 * M_PI / omega;
        auto driver = [c, freq](double t) { return -c + std::sin(freq * t); };

        out.p = {[ck2, kappa](double t) { return ck2 * std::pow(1.0 + t, 2.0 * kappa); }, {}};
        out.p_prime = {
            [ck2, kappa](double t) { return ck2 * 2.0 * kappa * std::pow(1.0 + t, 2.0 * kappa - 1.0); },
            {}};
        if (kappa < 1.0) {
            const double qc = -(ck2 / 4.0) * kappa * (3.0 * kappa - 2.0);
            out.q = {[kappa, driver, qc](double t) {
                         return std::pow(1.0 + t, 2.0 * kappa) * driver(t) +
                                qc * std::pow(1.0 + t, 2.0 * kappa - 2.0);
                     },
                     {}};
        } else {
            out.q = {[driver](double t) { return (1.0 + t) * (1.0 + t) * driver(t) - 0.25; }, {}};
        }
        out.w = constant(1.0);

        out.limit.p = constant(ck2);
        out.limit.p_prime = constant(0.0);
        out.limit.q = {[driver](double t) { return driver(t); }, {}};
        out.limit.w = constant(1.0);
        out.kind = ModulationKind::PeriodicallyModulated;
        return out;
    }

    if (name == "example5") {
        const double a = require(pars, "a", name);
        const double b = require(pars, "b", name);
        if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0))
            throw ConfigError("example5 exponents a, b must lie in (0, 1)");
        const double omega = positive_omega(pars, name);
        const double c = pars.count("c") ? pars.at("c") : 0.0;
        out.omega = omega;

        const double tc = std::exp(std::exp(1.0)) + 1.0;
        auto log_exponent = [a, b](double t) {
            const double lt = std::log(t);
            return 0.5 * (a + b) * lt + 0.5 * (b - a) * lt * std::sin(std::log(lt));
        };
        auto dlog = [a, b](double t) {
            const double s = std::log(std::log(t));
            return (0.5 * (a + b) + 0.5 * (b - a) * (std::sin(s) + std::cos(s))) / t;
        };
        const double p1 = std::exp(log_exponent(tc));
        const double d1 = p1 * dlog(tc);
        // On [0, tc]: the level p1 blended by a C^1 cubic ramp matching the
        // value and slope at tc (Hermite with zero start slope).
        auto p_eval = [=](double t) {
            if (t >= tc) return std::exp(log_exponent(t));
            const double s = t / tc;
            return p1 + (s * s * s - s * s) * tc * d1;
        };
        auto dp_eval = [=](double t) {
            if (t >= tc) return std::exp(log_exponent(t)) * dlog(t);
            const double s = t / tc;
            return (3.0 * s * s - 2.0 * s) * d1;
        };
        const double bp = std::fmod(tc, omega);
        out.p = {p_eval, {bp}, CoefficientFn::Smoothness::PiecewiseSmooth};
        out.p_prime = {dp_eval, {bp}, CoefficientFn::Smoothness::PiecewiseSmooth};

        const double freq = 2.0 * M_PI / omega;
        auto driver = [c, freq](double t) { return -c + std::sin(freq * t); };
        out.q = {[p_eval, driver](double t) { return p_eval(t) * driver(t); },
                 {bp},
                 CoefficientFn::Smoothness::PiecewiseSmooth};
        out.w = constant(1.0);

        out.limit.p = constant(1.0);
        out.limit.p_prime = constant(0.0);
        out.limit.q = {[driver](double t) { return driver(t); }, {}};
        out.limit.w = constant(1.0);
        out.kind = ModulationKind::PeriodicallyModulated;
        return out;
    }

    if (name == "appendix-asymptotic") {
        const double omega = positive_omega(pars, name);
        out.omega = omega;
        const double xc = std::exp(std::exp(1.0));
        const double bp = std::fmod(xc, omega);
        out.p = constant(1.0);
        out.p_prime = constant(0.0);
        out.q = constant(1.0);
        out.w = {[xc](double x) {
                     if (x <= xc) return 2.0;
                     return 2.0 + std::sin(std::log(std::log(x))) / std::log(x);
                 },
                 {bp},
                 CoefficientFn::Smoothness::PiecewiseSmooth};
        out.limit = {constant(1.0), constant(0.0), constant(1.0), constant(2.0)};
        out.kind = ModulationKind::AsymptoticallyPeriodic;
        return out;
    }

    throw ConfigError("unknown family '" + name + "'");
}

} // namespace slspec
