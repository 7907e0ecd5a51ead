#ifndef SLSPEC_DIAGNOSTICS_HPP
#define SLSPEC_DIAGNOSTICS_HPP

#include <vector>

#include "slspec/coefficients.hpp"

namespace slspec {

/// Carleman integral rho_L. Integrand is w/p for exactly periodic and
/// periodically modulated families, plain w for asymptotically periodic ones.
double carleman_rho(const SLParams& params, double L, double tol = 1e-10);

enum class StolzSelector { QoverP, WoverP, PprimeOverP, Q, W, OneOverP };

/// Partial sums S_N = sum_{n=1}^{N} int_0^omega |f((n+1)omega+s) - f(n omega+s)| ds
/// for N = 1..n_max. A bounded, slowly growing sequence is evidence of
/// period-to-period L^1 summability; no membership verdict is made.
std::vector<double> stolz_defect(const SLParams& params, StolzSelector sel, int n_max,
                                 double tol = 1e-10);

/// Potential of the unitarily equivalent half-line Schroedinger operator for
/// the example2 family, V(x) = (1 + t(x))^{2 kappa} * driver(t(x)).
double liouville_potential(const SLParams& params, double x);

} // namespace slspec

#endif
