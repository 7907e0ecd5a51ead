#ifndef SLSPEC_SPECTRAL_HPP
#define SLSPEC_SPECTRAL_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "slspec/mat2.hpp"
#include "slspec/transfer.hpp"

namespace slspec {

inline cplx discr(const Mat2& m) { return m.discr(); }

/// Roots of xi^2 - 2 v xi + 1 = 0 with the principal-branch product
/// sqrt(v-1) sqrt(v+1); on the cut (-1, 1) the value is the limit from the
/// upper half-plane, xi_plus = v + i sqrt(1 - v^2).
std::pair<cplx, cplx> xi_pm(cplx v);

/// Case classification of the monodromy matrix at z = 0.
struct CaseLabel {
    enum class Tag { I, IIa, IIb, III } tag = Tag::I;
    double trace_value = 0.0;
    double distance_to_boundary = 0.0; // |2 - |tr||
    bool marginal = false;             // verdict taken inside the eps collar
};

const char* to_string(CaseLabel::Tag tag);

CaseLabel classify(const SLParams& params, Frame frame, double eps_case = 1e-6,
                   double tol = 1e-10);

/// Eigenvalue pair lambda_pm = sqrt(det X) xi_pm(tr X / (2 sqrt(det X))).
struct EigenPair {
    cplx plus;
    cplx minus;
    bool complex_det = false; // principal branch used on a non-real determinant
};

EigenPair eigen_pm(const Mat2& x);

/// X = C D C^{-1} with C's first row (1, 1) and D = diag(lambda+, lambda-).
/// Throws DomainError when |X12| <= delta (pivot) or |discr X| <= delta.
std::pair<Mat2, Mat2> diagonalize(const Mat2& x, double delta = 1e-8);

/// Ordered disjoint open intervals where discr of the periodic-limit
/// monodromy is negative. Edges clamped by the scan range carry a flag.
struct BandList {
    struct Band {
        double lo = 0.0, hi = 0.0;
        bool lo_clamped = false, hi_clamped = false;
    };
    std::vector<Band> intervals;
    double resolution = 0.0;
    double edge_tol = 0.0;
};

BandList bands(const SLParams& params, double lambda_min, double lambda_max,
               double scan_step = 0.0, double edge_tol = 1e-9, double tol = 1e-10);

struct ScanPoint {
    double param = 0.0;
    double trace = 0.0;
    bool ok = false;
};

/// One monodromy trace at z = 0 per sweep point, points evaluated
/// independently (parallelizable). Failed points carry ok = false.
std::vector<ScanPoint> trace_scan(const std::string& family, const std::string& sweep_param,
                                  double lo, double hi, int count,
                                  const std::map<std::string, double>& fixed, double tol = 1e-10,
                                  int jobs = 1);

} // namespace slspec

#endif
