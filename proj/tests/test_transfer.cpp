#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle_helpers.hpp"
#include "slspec/transfer.hpp"

using namespace slspec;

namespace {
const double kTwoPi = 2.0 * M_PI;

SLParams example2(double kappa, double c) {
    return make_family("example2", {{"kappa", kappa}, {"c", c}, {"omega", kTwoPi}});
}
} // namespace

TEST_CASE("free transfer matrices in closed form") {
    const SLParams fr = make_family("free", {{"omega", M_PI}});
    const double t = 1.7;
    // z = 0: u'' = 0
    const Mat2 a = transfer_matrix(fr, 0.0, t, 0.0, Frame::DPrime);
    CHECK(std::abs(a.a11 - 1.0) < 1e-9);
    CHECK(std::abs(a.a12 - t) < 1e-9);
    CHECK(std::abs(a.a21) < 1e-9);
    CHECK(std::abs(a.a22 - 1.0) < 1e-9);
    // z = 1: rotation
    const Mat2 b = transfer_matrix(fr, 0.0, t, 1.0, Frame::DPrime);
    CHECK(std::abs(b.a11 - std::cos(t)) < 1e-9);
    CHECK(std::abs(b.a12 - std::sin(t)) < 1e-9);
    CHECK(std::abs(b.a21 + std::sin(t)) < 1e-9);
    CHECK(std::abs(b.a22 - std::cos(t)) < 1e-9);
}

TEST_CASE("constant-q trace") {
    const double omega = 1.3;
    const SLParams cq = make_family("constant-q", {{"q0", 1.0}, {"omega", omega}});
    const Mat2 m = transfer_matrix(cq, 0.0, omega, 0.0, Frame::DPrime);
    CHECK(m.trace().real() == doctest::Approx(2.0 * std::cosh(omega)).epsilon(1e-9));
}

TEST_CASE("modulated example2 transfer over the first period") {
    // Frozen against an independent integrator (scipy DOP853 at rtol 1e-12).
    const SLParams e2 = example2(0.5, 0.0);
    const Mat2 d = transfer_matrix(e2, 0.0, kTwoPi, 0.0, Frame::DPrime);
    CHECK(d.trace().real() == doctest::Approx(0.8161888587).epsilon(1e-7));
    const Mat2 pd = transfer_matrix(e2, 0.0, kTwoPi, 0.0, Frame::PDPrime);
    CHECK(pd.trace().real() == doctest::Approx(-2.7153487791).epsilon(1e-7));
}

TEST_CASE("monodromy") {
    const SLParams fr = make_family("free", {{"omega", M_PI}});
    CHECK(monodromy(fr, 4.0, Frame::DPrime).trace().real() == doctest::Approx(2.0).epsilon(1e-9));

    const SLParams e2c1 = example2(0.5, 1.0);
    CHECK(monodromy(e2c1, 0.0, Frame::PDPrime).trace().real() ==
          doctest::Approx(-2.6124189).epsilon(1e-6));
    // trace is frame-independent for a periodic limit
    CHECK(monodromy(e2c1, 0.0, Frame::DPrime).trace().real() ==
          doctest::Approx(-2.6124189).epsilon(1e-6));

    const SLParams cq = make_family("constant-q", {{"q0", -1.0}, {"omega", M_PI}});
    const Mat2 m = monodromy(cq, 0.0, Frame::DPrime);
    CHECK(max_entry_dist(m, {-1.0, 0.0, 0.0, -1.0}) < 1e-9);
}

TEST_CASE("monodromy determinant") {
    for (const SLParams& pr :
         {example2(0.5, 0.0), make_family("appendix-asymptotic", {{"omega", kTwoPi}})}) {
        const Mat2 pd = monodromy(pr, 0.7, Frame::PDPrime);
        CHECK(std::abs(pd.det() - 1.0) < 1e-9);
        const Mat2 d = monodromy(pr, 0.7, Frame::DPrime);
        CHECK(std::abs(d.det() - 1.0) < 1e-9); // p periodic, so det = p(0)/p(w) = 1
    }
}

TEST_CASE("monodromy z-derivative closed forms") {
    const SLParams f1 = make_family("free", {{"omega", 1.0}});
    CHECK(monodromy_dz(f1, 1.0, Frame::DPrime).trace().real() ==
          doctest::Approx(-std::sin(1.0)).epsilon(1e-8));

    // limit z -> 0 of -w sin(sqrt(z) w)/sqrt(z) is -w^2
    const SLParams fpi = make_family("free", {{"omega", M_PI}});
    CHECK(monodromy_dz(fpi, 0.0, Frame::DPrime).trace().real() ==
          doctest::Approx(-M_PI * M_PI).epsilon(1e-8));

    const SLParams cq = make_family("constant-q", {{"q0", 1.0}, {"omega", 1.0}});
    CHECK(monodromy_dz(cq, 0.0, Frame::DPrime).trace().real() ==
          doctest::Approx(-std::sinh(1.0)).epsilon(1e-8));
}

TEST_CASE("monodromy_dz matches central finite differences") {
    const SLParams e2 = example2(0.5, 0.0);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> re(-5.0, 5.0), im(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const cplx z(re(rng), im(rng));
        const double h = 1e-5;
        const Mat2 plus = monodromy(e2, z + h, Frame::PDPrime, 1e-12);
        const Mat2 minus = monodromy(e2, z - h, Frame::PDPrime, 1e-12);
        const Mat2 fd = (1.0 / (2.0 * h)) * (plus - minus);
        const Mat2 an = monodromy_dz(e2, z, Frame::PDPrime, 1e-12);
        CHECK(max_entry_dist(fd, an) / std::max(1.0, an.max_abs()) < 1e-6);
    }
}

TEST_CASE("analyticity: Cauchy-Riemann finite differences on monodromy entries") {
    const SLParams e2 = example2(0.5, 0.3);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> re(-3.0, 3.0), im(-0.5, 0.5);
    const double h = 1e-4;
    for (int i = 0; i < 10; ++i) {
        const cplx z(re(rng), im(rng));
        const Mat2 dre = (1.0 / (2.0 * h)) * (monodromy(e2, z + h, Frame::PDPrime, 1e-12) -
                                              monodromy(e2, z - h, Frame::PDPrime, 1e-12));
        const Mat2 dim =
            (1.0 / (2.0 * h)) * (monodromy(e2, z + cplx(0, h), Frame::PDPrime, 1e-12) -
                                 monodromy(e2, z - cplx(0, h), Frame::PDPrime, 1e-12));
        const Mat2 rotated = cplx(0.0, -1.0) * dim;
        CHECK(max_entry_dist(dre, rotated) / std::max(1.0, dre.max_abs()) < 1e-5);
    }
}

TEST_CASE("propagate closed forms") {
    const SLParams fr = make_family("free", {{"omega", M_PI}});
    {
        const std::vector<double> grid = {0.0, M_PI / 2.0};
        const auto tr = propagate(fr, BoundaryVector::dirichlet(), grid, 1.0, Frame::DPrime);
        CHECK(std::abs(tr.values[0][0]) < 1e-12); // first value equals eta
        CHECK(std::abs(tr.values[0][1] - 1.0) < 1e-12);
        CHECK(std::abs(tr.values[1][0] - 1.0) < 1e-9);
        CHECK(std::abs(tr.values[1][1]) < 1e-9);
    }
    {
        const std::vector<double> grid = {0.0, 3.0, 11.0};
        const auto tr = propagate(fr, BoundaryVector::neumann(), grid, 0.0, Frame::DPrime);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(std::abs(tr.values[i][0] - 1.0) < 1e-9);
            CHECK(std::abs(tr.values[i][1]) < 1e-9);
        }
    }
    {
        const SLParams cq = make_family("constant-q", {{"q0", 1.0}, {"omega", M_PI}});
        BoundaryVector eta{1.0, -1.0, BoundaryVector::Frame::S1};
        const std::vector<double> grid = {0.0, 5.0};
        const auto tr = propagate(cq, eta, grid, 0.0, Frame::DPrime);
        CHECK(tr.values[1][0].real() == doctest::Approx(std::exp(-5.0)).epsilon(1e-6));
        CHECK(tr.values[1][1].real() == doctest::Approx(-std::exp(-5.0)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(
        propagate(fr, BoundaryVector::dirichlet(), std::vector<double>{1.0, 0.5}, 0.0,
                  Frame::DPrime),
        DomainError);
}

TEST_CASE("shift matrices") {
    const SLParams fr = make_family("free", {{"omega", M_PI}});
    const Mat2 x0 = shift_matrix_Xn(fr, 0, 0.4, 2.0, Frame::DPrime);
    const Mat2 x7 = shift_matrix_Xn(fr, 7, 0.4, 2.0, Frame::DPrime);
    CHECK(max_entry_dist(x0, x7) < 1e-8); // exactly periodic: X_n independent of n
    CHECK(std::abs(x0.det() - 1.0) < 1e-9);

    // X_50 approaches the monodromy (frozen distance from the 1e3-period oracle run).
    const SLParams e2 = example2(0.5, 0.0);
    const Mat2 x50 = shift_matrix_Xn(e2, 50, 0.0, 0.0, Frame::DPrime);
    const Mat2 mono = monodromy(e2, 0.0, Frame::DPrime);
    const double dist = max_entry_dist(x50, mono);
    CHECK(dist < 0.06);
    CHECK(dist == doctest::Approx(0.0539).epsilon(0.05));

    // det X_n = p_n(t)/p_{n+1}(t) in the DPrime frame
    const double t = 1.1;
    for (int n : {0, 3, 20}) {
        const Mat2 x = shift_matrix_Xn(e2, n, t, 0.5, Frame::DPrime);
        const double expected =
            e2.p(t + n * e2.omega) / e2.p(t + (n + 1) * e2.omega);
        CHECK(x.det().real() == doctest::Approx(expected).epsilon(1e-9));
        CHECK(std::abs(x.det().imag()) < 1e-10);
    }
}

TEST_CASE("Liouville determinant invariant") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> tdist(0.1, 25.0), zdist(-4.0, 4.0);
    const SLParams e2 = example2(0.5, 0.4);
    for (int i = 0; i < 25; ++i) {
        const double t = tdist(rng);
        const cplx z(zdist(rng), 0.2 * zdist(rng));
        const Mat2 d = transfer_matrix(e2, 0.0, t, z, Frame::DPrime, 1e-11);
        CHECK(std::abs(d.det() * e2.p(t) / e2.p(0.0) - 1.0) < 1e-8);
        const Mat2 pd = transfer_matrix(e2, 0.0, t, z, Frame::PDPrime, 1e-11);
        CHECK(std::abs(pd.det() - 1.0) < 1e-8);
    }
}

TEST_CASE("composition of transfer matrices") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> tdist(0.0, 20.0), zdist(-3.0, 3.0);
    const SLParams e2 = example2(0.5, 0.0);
    for (int i = 0; i < 12; ++i) {
        double a = tdist(rng), b = tdist(rng), c = tdist(rng);
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        const cplx z(zdist(rng), 0.0);
        const Mat2 ab = transfer_matrix(e2, a, b, z, Frame::PDPrime, 1e-11);
        const Mat2 bc = transfer_matrix(e2, b, c, z, Frame::PDPrime, 1e-11);
        const Mat2 ac = transfer_matrix(e2, a, c, z, Frame::PDPrime, 1e-11);
        CHECK(max_entry_dist(bc * ab, ac) / std::max(1.0, ac.max_abs()) < 1e-8);
    }
}

TEST_CASE("frame conversion round trip") {
    const SLParams e2 = example2(0.5, 0.0);
    const double t0 = 0.3, t1 = 7.9;
    const Mat2 pd = transfer_matrix(e2, t0, t1, 1.5, Frame::PDPrime);
    const Mat2 d = transfer_matrix(e2, t0, t1, 1.5, Frame::DPrime);
    // convert DPrime back: diag(1, p(t1)) * d * diag(1, 1/p(t0))
    const Mat2 back{d.a11, d.a12 / e2.p(t0), d.a21 * e2.p(t1), d.a22 * e2.p(t1) / e2.p(t0)};
    CHECK(max_entry_dist(back, pd) / std::max(1.0, pd.max_abs()) < 1e-12);
}

TEST_CASE("adaptive integrator agrees with fixed-step RK4 oracle") {
    const SLParams e2 = example2(0.5, 0.3);
    const Mat2 adaptive = transfer_matrix(e2, 0.5, 9.5, cplx(1.0, 0.5), Frame::PDPrime, 1e-11);
    const Mat2 fixed = oracle::rk4_pd_transfer(e2, 0.5, 9.5, cplx(1.0, 0.5), 1e-4);
    CHECK(max_entry_dist(adaptive, fixed) < 1e-8);
}

TEST_CASE("propagate renormalizes on hyperbolic growth") {
    // q0 = 4: u ~ e^{2t}; by t = 350 the raw solution would overflow the
    // rescale threshold, so the stored values stay O(1) with the growth in
    // the log_scale column.
    const SLParams cq = make_family("constant-q", {{"q0", 4.0}, {"omega", M_PI}});
    std::vector<double> grid;
    for (int k = 0; k <= 14; ++k) grid.push_back(25.0 * k);
    const auto tr = propagate(cq, BoundaryVector::neumann(), grid, 0.0, Frame::DPrime);
    CHECK(tr.log_scale.back() > 100.0);
    for (const auto& v : tr.values) {
        CHECK(std::abs(v[0]) < 1e260);
        CHECK(std::isfinite(std::abs(v[0])));
    }
    // unscaled value still matches cosh(2t) through the log representation
    const double t_mid = grid[8];
    const double expected_log = 2.0 * t_mid - std::log(2.0); // log(e^{2t}/2)
    const double got_log = std::log(std::abs(tr.values[8][0])) + tr.log_scale[8];
    CHECK(got_log == doctest::Approx(expected_log).epsilon(1e-8));
}
