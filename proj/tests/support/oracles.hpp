#pragma once

// Test-side oracles, kept independent of the library code paths they check.

#include "specres/common.hpp"
#include "specres/models.hpp"

#include <cmath>
#include <functional>

namespace oracles {

using specres::cxd;

/// Adaptive Simpson on complex integrands (independent of the library quadrature).
inline cxd simpson_rec(const std::function<cxd(double)>& f, double a, double b, cxd fa, cxd fm,
                       cxd fb, cxd whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const cxd flm = f(lm), frm = f(rm);
    const cxd left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const cxd right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline cxd integrate(const std::function<cxd(double)>& f, double a, double b,
                     double tol = 1e-10, int depth = 40) {
    const cxd fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const cxd whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

/// Central finite difference of order k (repeated first differences).
inline cxd finite_difference(const std::function<cxd(double)>& f, double x, int k, double h) {
    if (k == 0) return f(x);
    auto g = [&](double y) { return finite_difference(f, y, k - 1, h); };
    return (g(x + h) - g(x - h)) / (2.0 * h);
}

/// Exact resonance pole of the solvable Lorentzian model: the root of
/// z = lambda + kappa*c + kappa^2 g^2/(z - x0 + i w) continued from above,
/// i.e. the quadratic root that tends to lambda as kappa -> 0.
inline cxd lorentzian_pole(double lambda, double c_shift, double g, double x0, double w,
                           double kappa) {
    const cxd l1 = lambda + kappa * c_shift;
    const cxd p = x0 - cxd(0.0, w);
    // z^2 - (l1 + p) z + l1 p - kappa^2 g^2 = 0
    const cxd half = 0.5 * (l1 + p);
    const cxd disc = std::sqrt(half * half - (l1 * p - kappa * kappa * g * g));
    const cxd r1 = half + disc, r2 = half - disc;
    return (std::abs(r1 - l1) < std::abs(r2 - l1)) ? r1 : r2;
}

}  // namespace oracles
