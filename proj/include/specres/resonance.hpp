#pragma once

#include "specres/common.hpp"
#include "specres/feshbach.hpp"

#include <vector>

namespace specres {

/// Taylor polynomial F_n of the boundary trace at lambda1(kappa), analytic on
/// the disc U_r(lambda) and standing in for F when locating the resonance.
struct TaylorApproximant {
    double center = 0.0;       // lambda1(kappa)
    double lambda = 0.0;       // disc center (unperturbed eigenvalue)
    std::vector<cxd> coefficients;  // c_k = F^{(k)}(lambda1+i0,kappa)/k!
    double radius_r = 0.0;
    double sup_bound = 0.0;    // recorded bound on |F_n| over U_r(lambda)

    int order() const { return int(coefficients.size()) - 1; }
    cxd eval(cxd z) const;
    cxd eval_derivative(cxd z) const;
};

struct Resonance {
    cxd lambda_res;
    double gamma_fgr = 0.0;       // filled from the kappa=0 trace by the pipeline
    cxd amplitude;                // a(kappa) = (1 - kappa^2 F_n'(lambda_res))^{-1}
    int iterations = 0;
    double expansion_gap = std::numeric_limits<double>::quiet_NaN();
    double kappa = 0.0;
};

struct TaylorOptions {
    int disc_samples = 64;
    bool retry_shrink = true;  // halve r once if -Im F_n fails on the sample circle
};

/// Build F_n from the trace; checks boundedness and strict -Im F_n > 0 on the
/// circle |z - lambda| = r/2.
TaylorApproximant build_taylor(const BoundaryTrace& trace, double lambda1, int n, double r,
                               const TaylorOptions& opts = {});

struct RootOptions {
    double tol_scale = 1e-12;   // tolerance = tol_scale * max(1,|lambda|)
    int max_fixed_point = 100;
    int max_newton = 50;
};

/// Locate the unique solution of z = lambda1 + kappa^2 F_n(z) in U_r by fixed
/// point iteration from lambda1 (Newton fallback), and the residue amplitude.
Resonance find_resonance(const TaylorApproximant& approx, double kappa,
                         const RootOptions& opts = {});

/// |lambda_res - lambda - kappa (phi,V phi) - kappa^2 F(lambda+i0,0)|.
double expansion_gap(const Resonance& res, const BoundaryTrace& trace_at_zero, double lambda,
                     double phi_V_phi);

/// Least-squares slope of log(gap) against log(kappa) over a resonance ladder;
/// requires at least three points.
double expansion_slope(const std::vector<Resonance>& ladder);

/// Winding number of z -> B_n(z)-z around 0 along |z-lambda| = r_prime
/// (trapezoid of the argument increment).
int winding_number(const TaylorApproximant& approx, double kappa, double r_prime,
                   int samples = 720);

}  // namespace specres
