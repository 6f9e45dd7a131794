#include "specres/chebyshev.hpp"

#include <cmath>

namespace specres {

ChebyshevSeries::ChebyshevSeries(double a, double b, std::vector<cxd> coeffs)
    : a_(a), b_(b), coeffs_(std::move(coeffs)) {
    if (!(a < b)) fail_config("ChebyshevSeries: empty interval");
    if (coeffs_.empty()) coeffs_.push_back(cxd(0.0));
}

std::vector<double> ChebyshevSeries::lobatto_nodes(double a, double b, int degree) {
    std::vector<double> xs(degree + 1);
    for (int j = 0; j <= degree; ++j) {
        double t = std::cos(M_PI * j / degree);
        xs[j] = 0.5 * (a + b) + 0.5 * (b - a) * t;
    }
    return xs;
}

ChebyshevSeries ChebyshevSeries::interpolate(const std::function<cxd(double)>& f, double a,
                                             double b, int degree) {
    if (degree < 1) fail_config("ChebyshevSeries::interpolate: degree must be >= 1");
    const int n = degree;
    std::vector<cxd> fv(n + 1);
    auto xs = lobatto_nodes(a, b, n);
    for (int j = 0; j <= n; ++j) fv[j] = f(xs[j]);
    // type-I DCT by direct summation; n is moderate throughout this project
    std::vector<cxd> c(n + 1, cxd(0.0));
    for (int k = 0; k <= n; ++k) {
        cxd acc = 0.5 * (fv[0] + (k % 2 == 0 ? fv[n] : -fv[n]));
        for (int j = 1; j < n; ++j) acc += fv[j] * std::cos(M_PI * k * j / n);
        c[k] = acc * (2.0 / n);
    }
    c[0] *= 0.5;
    c[n] *= 0.5;
    return ChebyshevSeries(a, b, std::move(c));
}

ChebyshevSeries ChebyshevSeries::fit(const std::vector<double>& xs, const std::vector<cxd>& ys,
                                     double a, double b, int degree) {
    if (xs.size() != ys.size() || xs.size() < std::size_t(degree + 1))
        fail_config("ChebyshevSeries::fit: need at least degree+1 samples");
    const int m = int(xs.size());
    MatrixXd T(m, degree + 1);
    for (int i = 0; i < m; ++i) {
        double t = (2.0 * xs[i] - (a + b)) / (b - a);
        double t0 = 1.0, t1 = t;
        T(i, 0) = 1.0;
        if (degree >= 1) T(i, 1) = t;
        for (int k = 2; k <= degree; ++k) {
            double t2 = 2.0 * t * t1 - t0;
            T(i, k) = t2;
            t0 = t1;
            t1 = t2;
        }
    }
    VectorXcd y(m);
    for (int i = 0; i < m; ++i) y(i) = ys[i];
    Eigen::MatrixXcd Tc = T.cast<cxd>();
    VectorXcd sol = (Tc.adjoint() * Tc).ldlt().solve(Tc.adjoint() * y);
    std::vector<cxd> c(sol.data(), sol.data() + sol.size());
    return ChebyshevSeries(a, b, std::move(c));
}

cxd ChebyshevSeries::eval(cxd z) const {
    const cxd t = (2.0 * z - (a_ + b_)) / (b_ - a_);
    // Clenshaw recurrence
    cxd b1 = 0.0, b2 = 0.0;
    for (int k = int(coeffs_.size()) - 1; k >= 1; --k) {
        cxd tmp = 2.0 * t * b1 - b2 + coeffs_[k];
        b2 = b1;
        b1 = tmp;
    }
    return t * b1 - b2 + coeffs_[0];
}

ChebyshevSeries ChebyshevSeries::derivative() const {
    const int n = int(coeffs_.size()) - 1;
    std::vector<cxd> d(std::max(1, n), cxd(0.0));
    if (n >= 1) {
        // standard Chebyshev derivative recurrence on [-1,1], then chain rule
        std::vector<cxd> dd(n + 2, cxd(0.0));
        for (int k = n - 1; k >= 0; --k) {
            dd[k] = dd[k + 2] + 2.0 * (k + 1) * coeffs_[k + 1];
        }
        dd[0] *= 0.5;
        const double scale = 2.0 / (b_ - a_);
        d.assign(dd.begin(), dd.begin() + n);
        for (auto& v : d) v *= scale;
        if (d.empty()) d.push_back(cxd(0.0));
    }
    return ChebyshevSeries(a_, b_, std::move(d));
}

double ChebyshevSeries::tail_magnitude() const {
    const std::size_t n = coeffs_.size();
    double t = std::abs(coeffs_[n - 1]);
    if (n >= 2) t += std::abs(coeffs_[n - 2]);
    return t;
}

}  // namespace specres
