#ifndef SLSPEC_ASYMPTOTICS_HPP
#define SLSPEC_ASYMPTOTICS_HPP

#include <vector>

#include "slspec/spectral.hpp"
#include "slspec/transfer.hpp"

namespace slspec {

/// Per-period samples u_n(t) of a solution, log-scaled: the true vector at
/// index n is (u, du) * exp(log_scale). du is u' in DPrime, p u' in PDPrime.
struct SolutionSeq {
    struct Entry {
        cplx u;
        cplx du;
        double log_scale;
    };
    double t = 0.0;
    BoundaryVector eta;
    cplx z;
    Frame frame = Frame::DPrime;
    std::vector<Entry> entries; // index 0..n_max
};

SolutionSeq solution_seq(const SLParams& params, const BoundaryVector& eta, double t, cplx z,
                         int n_max, double tol = 1e-10);

/// v_n = p_n(t) |u_{n+1} u'_n - u_n u'_{n+1}| for modulated families;
/// the (u, p u') determinant for asymptotically periodic ones.
struct TuranSeq {
    std::vector<double> values; // index 0..n_max-1
    double t = 0.0;
    cplx z;
    double tail_estimate = 0.0;  // last value
    double last_increment = 0.0; // |v_last - v_{last-1}|
};

TuranSeq turan_seq(const SLParams& params, const BoundaryVector& eta, double t, cplx z, int n_max,
                   double tol = 1e-10);

/// theta_k = arccos(tr X_k / (2 sqrt(det X_k))) for k in [n_lo, n_hi).
/// Throws NumericError naming k when some X_k is not elliptic.
std::vector<double> theta_phases(const SLParams& params, double t, double z, int n_lo, int n_hi,
                                 double tol = 1e-10);

/**
 * Tail value of (u_{n+1} - lambda_n^- u_n) / prod_{k=M}^{n-1} lambda_k^+
 * together with the fitted-envelope residual report. M is chosen adaptively
 * as the first index where X_n is safely elliptic with |X12| > delta.
 */
struct PhiEstimate {
    cplx phi;
    double amplitude = 0.0;    // envelope of u_n / prod |lambda_k^+|
    int m_start = 0;           // adaptive M
    double delta = 1e-3;       // ellipticity margin used for M
    double residual_sup = 0.0; // sup |E_n| over the last 10 indices
    double theta_inf = 0.0;
    bool possibly_vanishing = false;
    std::vector<double> scaled_u; // u_n / prod_{k=M}^{n-1} |lambda_k^+|, n = M..n_max
    std::vector<double> phase;    // sum_{k=M}^{n-1} theta_k, same indexing
};

PhiEstimate phi_estimate(const SLParams& params, const BoundaryVector& eta, double t, double z,
                         int n_max, double tol = 1e-10, double vanish_floor = 1e-8);

/// Exponentially decaying solution by backward recursion from the
/// lambda^- eigenvector, with renormalization. Trace is sampled at period
/// boundaries in the PDPrime frame.
struct MinimalSolution {
    SolutionTrace trace;
    double decay_factor = 0.0; // per-period factor exp(mean log |lambda_k^-|)
    double decay_log_rate = 0.0;
    std::vector<double> per_period_factors; // |lambda_k^-|, k = m_start..n_max-1
    int m_start = 0;
};

MinimalSolution minimal_solution(const SLParams& params, cplx z, int n_max, double tol = 1e-10);

namespace detail {
/// One pass over periods [t + k omega, t + (k+1) omega], k = 0..count-1,
/// returning the shift matrices (in the frame natural to the modulation kind:
/// DPrime for modulated, PDPrime otherwise) and the carried solution samples.
struct PeriodScan {
    std::vector<Mat2> shift;       // X_k
    std::vector<Mat2> shift_pd;    // X_k in PDPrime frame
    std::vector<SolutionSeq::Entry> samples; // PDPrime samples, index 0..count
    std::vector<double> p_at;      // p(t + k omega), index 0..count
    Frame shift_frame = Frame::DPrime;
};
PeriodScan scan_periods(const SLParams& params, const BoundaryVector& eta, double t, cplx z,
                        int count, double tol);
} // namespace detail

} // namespace slspec

#endif
