#pragma once

#include "specres/common.hpp"

#include <functional>
#include <vector>

namespace specres {

/// Chebyshev series on [a,b] with complex coefficients, built by interpolation
/// at Chebyshev-Lobatto points. Supports evaluation (Clenshaw, valid for complex
/// arguments near the interval), spectral differentiation, and a least-squares
/// fit variant for noisy samples.
class ChebyshevSeries {
public:
    ChebyshevSeries() = default;
    ChebyshevSeries(double a, double b, std::vector<cxd> coeffs);

    /// Interpolate f at degree+1 Lobatto nodes.
    static ChebyshevSeries interpolate(const std::function<cxd(double)>& f, double a, double b,
                                       int degree);

    /// Least-squares fit of degree `degree` to arbitrary samples (xs, ys) in [a,b].
    static ChebyshevSeries fit(const std::vector<double>& xs, const std::vector<cxd>& ys,
                               double a, double b, int degree);

    cxd eval(cxd z) const;
    cxd operator()(double x) const { return eval(cxd(x, 0.0)); }

    ChebyshevSeries derivative() const;

    double a() const { return a_; }
    double b() const { return b_; }
    int degree() const { return int(coeffs_.size()) - 1; }
    const std::vector<cxd>& coeffs() const { return coeffs_; }

    /// Magnitude of the trailing two coefficients; resolution diagnostic.
    double tail_magnitude() const;

    static std::vector<double> lobatto_nodes(double a, double b, int degree);

private:
    double a_ = -1.0, b_ = 1.0;
    std::vector<cxd> coeffs_;
};

}  // namespace specres
