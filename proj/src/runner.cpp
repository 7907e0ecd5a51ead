#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "slspec/asymptotics.hpp"
#include "slspec/config.hpp"
#include "slspec/density.hpp"
#include "slspec/diagnostics.hpp"
#include "slspec/output.hpp"
#include "slspec/spectral.hpp"
#include "slspec/threadpool.hpp"

namespace slspec {

namespace {

BoundaryVector to_eta(const RunConfig::EtaCfg& e) {
    BoundaryVector eta;
    eta.e1 = e.e1;
    eta.e2 = e.e2;
    eta.frame = e.frame == "stilde" ? BoundaryVector::Frame::Stilde : BoundaryVector::Frame::S1;
    return eta;
}

void check_eta(const BoundaryVector& eta, const SLParams& params) {
    if (eta.norm_defect(params.p(0.0)) > 1e-9)
        throw ConfigError("eta is not normalized in the declared frame");
}

CsvWriter make_writer(const RunConfig& cfg) {
    CsvWriter csv;
    for (const auto& [k, v] : cfg.effective()) csv.header(k, v);
    return csv;
}

std::string out_path(const std::string& dir, const RunConfig& cfg, const std::string& ext) {
    return (std::filesystem::path(dir) / (cfg.out_prefix + "_" + cfg.command + ext)).string();
}

std::string verdict_line(const CaseLabel& label, const RunConfig& cfg) {
    std::string text = "Case ";
    text += to_string(label.tag);
    const bool known_kappa = cfg.family == "example2" && cfg.family_params.count("kappa");
    switch (label.tag) {
        case CaseLabel::Tag::I:
            if (known_kappa) {
                const double kappa = cfg.family_params.at("kappa");
                if (kappa <= 0.5)
                    text += ": purely absolutely continuous spectrum covering the real line";
                else
                    text += ": limit circle at infinity";
            }
            break;
        case CaseLabel::Tag::III:
            text += ": all self-adjoint extensions have no essential spectrum";
            break;
        case CaseLabel::Tag::IIa:
        case CaseLabel::Tag::IIb:
            text += ": critical boundary case";
            break;
    }
    if (label.marginal) text += " (numerically marginal)";
    return text;
}

std::vector<double> period_schedule(double omega, int start, int stop, int step,
                                    double offset = 0.0) {
    std::vector<double> out;
    for (int n = start; n <= stop; n += step)
        out.push_back(offset + static_cast<double>(n) * omega);
    if (out.size() < 2) throw ConfigError("density schedule has fewer than 2 points");
    return out;
}

} // namespace

std::vector<std::string> run(const RunConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const SLParams params = make_family(cfg.family, cfg.family_params);
    std::vector<std::string> artifacts;
    CsvWriter csv = make_writer(cfg);
    const std::string csv_path = out_path(out_dir, cfg, ".csv");
    const std::string svg_path = out_path(out_dir, cfg, ".svg");

    auto emit_plot = [&](const std::string& title, const std::vector<double>& xs,
                         const std::vector<double>& ys, const std::string& xl,
                         const std::string& yl) {
        if (!cfg.plot) return;
        write_svg(svg_path, title, xs, ys, xl, yl);
        artifacts.push_back(svg_path);
    };

    if (cfg.command == "classify") {
        const CaseLabel label = classify(params, cfg.frame, cfg.eps_case, cfg.tol);
        csv.columns({"case", "trace", "distance_to_boundary", "marginal"});
        csv.row({std::string(to_string(label.tag)), fmt17(label.trace_value),
                 fmt17(label.distance_to_boundary), label.marginal ? "true" : "false"});
        std::cout << verdict_line(label, cfg) << "\n";
    } else if (cfg.command == "trace-scan") {
        const auto points = trace_scan(cfg.family, cfg.scan.param, cfg.scan.lo, cfg.scan.hi,
                                       cfg.scan.count, cfg.family_params, cfg.tol, cfg.jobs);
        csv.columns({"param", "trace"});
        std::vector<double> xs, ys;
        for (const auto& pt : points) {
            csv.row({pt.param, pt.trace});
            xs.push_back(pt.param);
            ys.push_back(pt.ok ? pt.trace : std::nan(""));
        }
        emit_plot("monodromy trace at z = 0", xs, ys, cfg.scan.param, "trace");
    } else if (cfg.command == "bands") {
        const BandList list = bands(params, cfg.band.lambda_min, cfg.band.lambda_max,
                                    cfg.band.scan_step, cfg.band.edge_tol, cfg.tol);
        csv.header("resolution", fmt17(list.resolution));
        csv.columns({"lo", "hi", "lo_clamped", "hi_clamped"});
        for (const auto& b : list.intervals)
            csv.row({fmt17(b.lo), fmt17(b.hi), b.lo_clamped ? "true" : "false",
                     b.hi_clamped ? "true" : "false"});
        if (cfg.plot) {
            const int n = 400;
            std::vector<double> xs(n + 1), ys(n + 1);
            parallel_for(n + 1, cfg.jobs, [&](int i) {
                xs[i] = cfg.band.lambda_min +
                        (cfg.band.lambda_max - cfg.band.lambda_min) * i / double(n);
                ys[i] = monodromy(params, xs[i], Frame::PDPrime, cfg.tol).trace().real();
            });
            emit_plot("monodromy trace vs lambda", xs, ys, "lambda", "trace");
        }
    } else if (cfg.command == "turan") {
        const auto eta = to_eta(cfg.turan.eta);
        check_eta(eta, params);
        const TuranSeq seq =
            turan_seq(params, eta, cfg.turan.t, cplx(cfg.turan.z, 0.0), cfg.turan.n_max, cfg.tol);
        csv.header("tail_estimate", fmt17(seq.tail_estimate));
        csv.header("last_increment", fmt17(seq.last_increment));
        csv.columns({"n", "value"});
        std::vector<double> xs, ys;
        for (std::size_t n = 0; n < seq.values.size(); ++n) {
            csv.row({static_cast<double>(n), seq.values[n]});
            xs.push_back(static_cast<double>(n));
            ys.push_back(seq.values[n]);
        }
        emit_plot("Turan determinant sequence", xs, ys, "n", "p_n |D_n|");
    } else if (cfg.command == "phi") {
        const auto eta = to_eta(cfg.phi.eta);
        check_eta(eta, params);
        const PhiEstimate est =
            phi_estimate(params, eta, cfg.phi.t, cfg.phi.z, cfg.phi.n_max, cfg.tol);
        csv.header("adaptive_m", std::to_string(est.m_start));
        csv.header("delta", fmt17(est.delta));
        csv.header("phi_abs", fmt17(std::abs(est.phi)));
        csv.header("phi_arg", fmt17(std::arg(est.phi)));
        csv.header("amplitude", fmt17(est.amplitude));
        csv.header("residual_sup", fmt17(est.residual_sup));
        csv.header("possibly_vanishing", est.possibly_vanishing ? "true" : "false");
        csv.columns({"n", "scaled_u", "phase"});
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < est.scaled_u.size(); ++i) {
            const double n = static_cast<double>(est.m_start) + static_cast<double>(i);
            csv.row({n, est.scaled_u[i], est.phase[i]});
            xs.push_back(n);
            ys.push_back(est.scaled_u[i]);
        }
        emit_plot("scaled eigenvector samples", xs, ys, "n", "u_n / prod |lambda+|");
    } else if (cfg.command == "density") {
        const auto eta = to_eta(cfg.density.eta);
        check_eta(eta, params);
        const auto schedule =
            period_schedule(params.omega, cfg.density.schedule_start, cfg.density.schedule_stop,
                            cfg.density.schedule_step, cfg.density.s);
        const DensityReport report =
            spectral_density(params, eta, cfg.density.lambda, schedule, cfg.tol);
        csv.columns({"lambda", "L", "K_L", "rho_L", "ratio", "g", "g_err", "dos", "mu_prime"});
        std::vector<double> xs, ys;
        for (const auto& s : report.samples) {
            csv.row({report.lambda, s.L, s.K, s.rho, s.ratio, report.g, report.g_error, report.dos,
                     report.mu_prime});
            xs.push_back(s.L);
            ys.push_back(s.ratio);
        }
        emit_plot("K_L / rho_L", xs, ys, "L", "ratio");
    } else if (cfg.command == "dos") {
        const auto eta = to_eta(cfg.dos.eta);
        check_eta(eta, params);
        std::vector<double> schedule;
        for (int n : cfg.dos.schedule) schedule.push_back(static_cast<double>(n) * params.omega);
        const CountTable table =
            dos_convergence(params, eta, cfg.dos.window_a, cfg.dos.window_b, schedule,
                            std::max(cfg.tol, 1e-9));
        csv.columns({"L", "count", "rho_L", "normalized", "target"});
        std::vector<double> xs, ys;
        for (const auto& r : table.rows) {
            csv.row({fmt17(r.L), std::to_string(r.count), fmt17(r.rho), fmt17(r.normalized),
                     fmt17(table.target)});
            xs.push_back(r.L);
            ys.push_back(r.normalized);
        }
        emit_plot("normalized eigenvalue counts", xs, ys, "L", "count / rho_L");
    } else if (cfg.command == "eigcount") {
        const auto eta = to_eta(cfg.eigcount.eta);
        check_eta(eta, params);
        const double L = cfg.eigcount.l_periods * params.omega;
        const int count =
            count_eigenvalues(params, eta, L, cfg.eigcount.window_a, cfg.eigcount.window_b,
                              cfg.eigcount.grid_step, std::max(cfg.tol, 1e-9));
        const double rho = carleman_rho(params, L, cfg.tol);
        double target = 0.0;
        try {
            target = dos_mass(params, cfg.eigcount.window_a, cfg.eigcount.window_b, cfg.tol);
        } catch (const Error&) {
            target = std::nan("");
        }
        csv.columns({"L", "count", "rho_L", "normalized", "target"});
        csv.row({fmt17(L), std::to_string(count), fmt17(rho), fmt17(count / rho), fmt17(target)});
    } else if (cfg.command == "cauchy") {
        const auto eta = to_eta(cfg.cauchy.eta);
        check_eta(eta, params);
        const cplx z(cfg.cauchy.z_re, cfg.cauchy.z_im);
        csv.columns({"L", "re", "im", "re_over_rho", "im_over_rho"});
        std::vector<double> xs, ys;
        for (int n : cfg.cauchy.schedule) {
            const double L = static_cast<double>(n) * params.omega;
            const cplx v = cauchy_transform(params, eta, L, z, cfg.tol);
            const double rho = carleman_rho(params, L, cfg.tol);
            csv.row({L, v.real(), v.imag(), v.real() / rho, v.imag() / rho});
            xs.push_back(L);
            ys.push_back(v.imag() / rho);
        }
        emit_plot("Cauchy transform (imaginary part, normalized)", xs, ys, "L", "Im / rho_L");
    } else if (cfg.command == "example1-check") {
        // Shifted-determinant experiment: D(t) mu'(lambda) against
        // sin(sqrt(lambda) omega) / pi for the free family.
        const auto eta = to_eta(cfg.example1.eta);
        check_eta(eta, params);
        const double omega = params.omega;
        const double t = cfg.example1.t;
        csv.columns({"lambda", "lhs", "rhs", "deviation"});
        std::vector<double> xs, ys;
        for (int i = 0; i < cfg.example1.count; ++i) {
            const double lam =
                cfg.example1.count == 1
                    ? cfg.example1.lambda_lo
                    : cfg.example1.lambda_lo + (cfg.example1.lambda_hi - cfg.example1.lambda_lo) *
                                                   i / double(cfg.example1.count - 1);
            const std::vector<double> grid = {0.0, t, t + omega};
            const SolutionTrace tr =
                propagate(params, eta, grid, cplx(lam, 0.0), Frame::DPrime, cfg.tol);
            const cplx d = tr.values[2][0] * tr.values[1][1] - tr.values[1][0] * tr.values[2][1];
            std::vector<double> schedule;
            for (int n = cfg.example1.periods / 2; n <= cfg.example1.periods; ++n)
                schedule.push_back(n * omega);
            const DensityReport rep = spectral_density(params, eta, lam, schedule, cfg.tol);
            const double lhs = d.real() * rep.mu_prime;
            const double rhs = std::sin(std::sqrt(lam) * omega) / M_PI;
            csv.row({lam, lhs, rhs, std::abs(lhs - rhs)});
            xs.push_back(lam);
            ys.push_back(std::abs(lhs - rhs));
        }
        emit_plot("shifted-determinant identity deviation", xs, ys, "lambda", "|lhs - rhs|");
    } else {
        throw ConfigError("unknown command '" + cfg.command + "'");
    }

    csv.write(csv_path);
    artifacts.insert(artifacts.begin(), csv_path);
    return artifacts;
}

} // namespace slspec
