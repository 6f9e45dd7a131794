#pragma once

#include "specres/common.hpp"

#include <functional>
#include <vector>

namespace specres {

/// Gauss-Legendre rule on [-1,1]; nodes/weights computed once per order and cached.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    static const GaussLegendre& get(int order);

    template <typename F>
    auto integrate(F&& f, double a, double b) const {
        using R = decltype(f(a));
        const double h = 0.5 * (b - a), m = 0.5 * (a + b);
        R acc = R(0);
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += R(weights[i]) * f(m + h * nodes[i]);
        return R(h) * acc;
    }
};

/// Adaptive bisection integrator (GL-15 per panel, whole-vs-halves error estimate).
/// Works for double and complex integrands.
template <typename F>
auto adaptive_integrate(F&& f, double a, double b, double abs_tol, int max_depth = 48) {
    using R = decltype(f(a));
    const auto& rule = GaussLegendre::get(15);
    struct Frame {
        double a, b;
        int depth;
    };
    R total = R(0);
    std::vector<Frame> stack{{a, b, 0}};
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        const double m = 0.5 * (fr.a + fr.b);
        R whole = rule.integrate(f, fr.a, fr.b);
        R left = rule.integrate(f, fr.a, m);
        R right = rule.integrate(f, m, fr.b);
        double err = std::abs(whole - left - right);
        if (err < abs_tol * std::max(1e-3, (fr.b - fr.a) / (b - a)) || fr.depth >= max_depth) {
            total += left + right;
        } else {
            stack.push_back({fr.a, m, fr.depth + 1});
            stack.push_back({m, fr.b, fr.depth + 1});
        }
    }
    return total;
}

/// PV integral over [a,b] of f(x)/(E-x) with a < E < b, by singularity subtraction:
///   PV = \int (f(x)-f(E))/(E-x) dx + f(E)*log((E-a)/(b-E)).
/// The subtracted integrand is smooth for smooth f; integrated with GL of the
/// given order (default 256 per the project convention).
double pv_cauchy(const std::function<double(double)>& f, double a, double b, double E,
                 int order = 256);

/// PV integral over the whole line of f(x)/(E-x) for integrable f:
/// subtracted GL-256 on [E-R, E+R] (log term cancels by symmetry) plus
/// tan-substituted GL on both tails, covering the infinite range exactly.
double pv_cauchy_line(const std::function<double(double)>& f, double E, double feature_scale,
                      int order = 256);

/// Neville extrapolation to x=0 of samples (x_i, y_i), x_i > 0 decreasing.
/// Returns the tableau entry with the smallest successive-difference estimate;
/// est_err receives that estimate.
cxd neville_to_zero(const std::vector<double>& xs, const std::vector<cxd>& ys, double* est_err);

/// Moments \int_{-1}^{1} P_k(x) e^{-i theta x} dx = 2 (-i)^k j_k(theta) for k=0..kmax.
/// Handles theta of either sign; j_k is the spherical Bessel function.
std::vector<cxd> legendre_oscillatory_moments(double theta, int kmax);

}  // namespace specres
