#include "slspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slspec/threadpool.hpp"

namespace slspec {

std::pair<cplx, cplx> xi_pm(cplx v) {
    cplx plus;
    if (v.imag() == 0.0 && std::abs(v.real()) < 1.0) {
        // Limit from the upper half-plane onto the cut.
        plus = cplx(v.real(), std::sqrt(1.0 - v.real() * v.real()));
    } else {
        plus = v + std::sqrt(v - 1.0) * std::sqrt(v + 1.0);
    }
    return {plus, 2.0 * v - plus};
}

const char* to_string(CaseLabel::Tag tag) {
    switch (tag) {
        case CaseLabel::Tag::I: return "I";
        case CaseLabel::Tag::IIa: return "IIa";
        case CaseLabel::Tag::IIb: return "IIb";
        case CaseLabel::Tag::III: return "III";
    }
    return "?";
}

CaseLabel classify(const SLParams& params, Frame frame, double eps_case, double tol) {
    if (!(eps_case > 0.0)) throw DomainError("classify: eps_case must be positive");
    const Mat2 m = monodromy(params, 0.0, frame, tol);
    const double tr = m.trace().real();
    CaseLabel label;
    label.trace_value = tr;
    label.distance_to_boundary = std::abs(2.0 - std::abs(tr));
    if (std::abs(tr) < 2.0 - eps_case) {
        label.tag = CaseLabel::Tag::I;
    } else if (std::abs(tr) > 2.0 + eps_case) {
        label.tag = CaseLabel::Tag::III;
    } else {
        // Unit-determinant matrix with a double eigenvalue +-1 is
        // diagonalizable iff it equals +-Id.
        label.marginal = true;
        const double sign = tr >= 0.0 ? 1.0 : -1.0;
        const Mat2 target = {sign, 0.0, 0.0, sign};
        label.tag = max_entry_dist(m, target) < eps_case ? CaseLabel::Tag::IIa
                                                         : CaseLabel::Tag::IIb;
    }
    return label;
}

EigenPair eigen_pm(const Mat2& x) {
    const cplx d = x.det();
    const cplx dsc = x.discr();
    if (std::abs(dsc) < 1e-12)
        throw DomainError("eigen_pm: degenerate spectrum (|discr| < 1e-12)");
    const cplx sq = std::sqrt(d);
    const auto [xp, xm] = xi_pm(x.trace() / (2.0 * sq));
    EigenPair out;
    out.plus = sq * xp;
    out.minus = sq * xm;
    out.complex_det = std::abs(d.imag()) > 1e-14 * std::abs(d);
    return out;
}

std::pair<Mat2, Mat2> diagonalize(const Mat2& x, double delta) {
    if (std::abs(x.a12) <= delta)
        throw DomainError("diagonalize: |X12| below pivot threshold");
    if (std::abs(x.discr()) <= delta)
        throw DomainError("diagonalize: |discr X| below threshold");
    const EigenPair ev = eigen_pm(x);
    const Mat2 c{1.0, 1.0, (ev.plus - x.a11) / x.a12, (ev.minus - x.a11) / x.a12};
    const Mat2 d{ev.plus, 0.0, 0.0, ev.minus};
    return {c, d};
}

namespace {

struct EdgePoint {
    double lambda;
    bool clamped;
};

} // namespace

BandList bands(const SLParams& params, double lambda_min, double lambda_max, double scan_step,
               double edge_tol, double tol) {
    if (!(lambda_min < lambda_max)) throw DomainError("bands: need lambda_min < lambda_max");
    if (scan_step <= 0.0) scan_step = (lambda_max - lambda_min) / 2000.0;
    if (edge_tol <= 0.0) edge_tol = 1e-9;

    auto g = [&](double lam) { return monodromy(params, lam, Frame::PDPrime, tol).trace().real(); };
    auto dg = [&](double lam) {
        return monodromy_dz(params, lam, Frame::PDPrime, std::min(tol, 1e-11)).trace().real();
    };
    auto g_fine = [&](double lam) {
        return monodromy(params, lam, Frame::PDPrime, std::min(tol, 1e-12)).trace().real();
    };

    const int n = std::max(2, static_cast<int>(std::ceil((lambda_max - lambda_min) / scan_step)));
    std::vector<double> lam(n + 1), val(n + 1);
    for (int i = 0; i <= n; ++i) {
        lam[i] = lambda_min + (lambda_max - lambda_min) * static_cast<double>(i) / n;
        val[i] = g(lam[i]);
    }

    std::vector<double> edges;

    // Transversal crossings of +-2, bisected past edge_tol in lambda so the
    // trace at the reported edge is itself within edge_tol of +-2.
    const double edge_width = std::min(edge_tol, 1e-12);
    auto bisect_threshold = [&](double lo, double hi, double thr) {
        double flo = g_fine(lo) - thr;
        for (int it = 0; it < 200 && hi - lo > edge_width; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = g_fine(mid) - thr;
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };
    for (int i = 0; i <= n; ++i) {
        for (double thr : {2.0, -2.0}) {
            // A grid value exactly on the threshold is itself an edge sample
            // (happens when q - lambda w vanishes identically).
            if (val[i] == thr) {
                edges.push_back(lam[i]);
                continue;
            }
            if (i < n && val[i + 1] != thr && (val[i] - thr) * (val[i + 1] - thr) < 0.0)
                edges.push_back(bisect_threshold(lam[i], lam[i + 1], thr));
        }
    }

    // Touching edges: local extrema of |g| reaching 2 without a sign change
    // (closed gaps). Located by bisecting dg, which crosses zero transversally
    // there.
    const double touch_accept = std::max(10.0 * edge_tol, 1e-8);
    auto bisect_dg = [&](double lo, double hi) {
        double flo = dg(lo);
        for (int it = 0; it < 200 && hi - lo > std::min(edge_tol, 1e-11); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = dg(mid);
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };
    for (int i = 1; i < n; ++i) {
        const double d1 = val[i] - val[i - 1];
        const double d2 = val[i + 1] - val[i];
        if (d1 * d2 > 0.0) continue; // not a discrete extremum
        if (std::max({std::abs(val[i - 1]), std::abs(val[i]), std::abs(val[i + 1])}) < 2.0 - 1e-3)
            continue;
        if (std::abs(val[i]) > 2.0 + 1e-6) continue; // handled by threshold crossings
        if (dg(lam[i - 1]) * dg(lam[i + 1]) >= 0.0) continue;
        const double lam_e = bisect_dg(lam[i - 1], lam[i + 1]);
        const double ge = g_fine(lam_e);
        if (std::abs(std::abs(ge) - 2.0) <= touch_accept) {
            edges.push_back(lam_e); // bands touch here
        } else if (std::abs(ge) > 2.0) {
            // Thin open gap unresolved by the grid.
            const double thr = ge > 0.0 ? 2.0 : -2.0;
            edges.push_back(bisect_threshold(lam[i - 1], lam_e, thr));
            edges.push_back(bisect_threshold(lam_e, lam[i + 1], thr));
        }
    }

    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [&](double a, double b) { return std::abs(a - b) < 2.0 * edge_tol; }),
                edges.end());

    std::vector<EdgePoint> cuts;
    cuts.push_back({lambda_min, true});
    for (double e : edges)
        if (e > lambda_min && e < lambda_max) cuts.push_back({e, false});
    cuts.push_back({lambda_max, true});

    BandList out;
    out.resolution = scan_step;
    out.edge_tol = edge_tol;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i].lambda;
        const double hi = cuts[i + 1].lambda;
        if (hi - lo < 2.0 * edge_tol) continue;
        const double mid = 0.5 * (lo + hi);
        if (std::abs(g(mid)) < 2.0)
            out.intervals.push_back({lo, hi, cuts[i].clamped, cuts[i + 1].clamped});
    }
    return out;
}

std::vector<ScanPoint> trace_scan(const std::string& family, const std::string& sweep_param,
                                  double lo, double hi, int count,
                                  const std::map<std::string, double>& fixed, double tol,
                                  int jobs) {
    if (count < 2) throw DomainError("trace_scan: count must be >= 2");
    std::vector<ScanPoint> points(static_cast<std::size_t>(count));
    parallel_for(count, jobs, [&](int i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
        ScanPoint& pt = points[static_cast<std::size_t>(i)];
        pt.param = x;
        try {
            auto pars = fixed;
            pars[sweep_param] = x;
            const SLParams family_params = make_family(family, pars);
            pt.trace = monodromy(family_params, 0.0, Frame::PDPrime, tol).trace().real();
            pt.ok = true;
        } catch (const Error&) {
            pt.trace = std::numeric_limits<double>::quiet_NaN();
            pt.ok = false;
        }
    });
    return points;
}

} // namespace slspec
