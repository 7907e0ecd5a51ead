#ifndef SLSPEC_DENSITY_HPP
#define SLSPEC_DENSITY_HPP

#include <span>
#include <vector>

#include "slspec/spectral.hpp"
#include "slspec/transfer.hpp"

namespace slspec {

/// K_L(lambda, lambda; eta) = int_0^L |u|^2 w dt, accumulated alongside the
/// propagation.
double cd_kernel_diag(const SLParams& params, const BoundaryVector& eta, double lambda, double L,
                      double tol = 1e-10);

struct GEstimate {
    double g = 0.0;
    double error = 0.0;
    struct Sample {
        double L, K, rho, ratio;
    };
    std::vector<Sample> samples;
};

/// Cesaro-smoothed tail of K_L / rho_L over the last quarter of the schedule;
/// the error estimate is half the tail's max - min.
GEstimate g_estimate(const SLParams& params, const BoundaryVector& eta, double lambda,
                     std::span<const double> L_schedule, double tol = 1e-10);

/// Density of states. Constant in lambda for modulated Case I families;
/// lambda-dependent on the bands for (asymptotically) periodic ones.
double dos_density(const SLParams& params, double lambda, double tol = 1e-10);

/// nu_infinity((a, b]): integral of the density-of-states density.
double dos_mass(const SLParams& params, double a, double b, double tol = 1e-10);

struct DensityReport {
    double lambda = 0.0;
    std::vector<GEstimate::Sample> samples;
    double g = 0.0;
    double g_error = 0.0;
    double dos = 0.0;
    double mu_prime = 0.0;
    ModulationKind kind = ModulationKind::ExactlyPeriodic;
};

DensityReport spectral_density(const SLParams& params, const BoundaryVector& eta, double lambda,
                               std::span<const double> L_schedule, double tol = 1e-10);

/// Number of zeros of lambda -> u(L, eta; lambda) in (a, b], by sign-change
/// scanning plus bisection to 1e-10.
int count_eigenvalues(const SLParams& params, const BoundaryVector& eta, double L, double a,
                      double b, double lambda_grid_step = 0.0, double tol = 1e-8);

struct CountTable {
    struct Row {
        double L;
        int count;
        double rho;
        double normalized;
    };
    std::vector<Row> rows;
    double target = 0.0; // nu_infinity of the window
};

CountTable dos_convergence(const SLParams& params, const BoundaryVector& eta, double a, double b,
                           std::span<const double> L_schedule, double tol = 1e-8);

/// -d_z u(L, eta; z) / u(L, eta; z) via the variational ODE; Herglotz for
/// Im z > 0.
cplx cauchy_transform(const SLParams& params, const BoundaryVector& eta, double L, cplx z,
                      double tol = 1e-10);

/// int_0^omega w_lim / p_lim (modulated) or int_0^omega w_lim (periodic
/// frames); the normalization gamma of the density-of-states formulas.
double dos_gamma(const SLParams& params, double tol = 1e-10);

} // namespace slspec

#endif
