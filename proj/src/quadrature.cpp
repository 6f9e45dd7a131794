#include "specres/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace specres {

namespace {

GaussLegendre build_rule(int order) {
    // Newton iteration on Legendre polynomials, nodes symmetric about 0.
    GaussLegendre rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const GaussLegendre& GaussLegendre::get(int order) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

double pv_cauchy(const std::function<double(double)>& f, double a, double b, double E,
                 int order) {
    if (!(a < E && E < b)) fail_config("pv_cauchy: singularity not interior to [a,b]");
    const double fE = f(E);
    auto sub = [&](double x) {
        double d = E - x;
        if (std::abs(d) < 1e-14 * std::max(1.0, std::abs(E))) {
            // derivative limit of the difference quotient
            double h = 1e-6 * std::max(1.0, std::abs(E));
            return -(f(E + h) - f(E - h)) / (2.0 * h);
        }
        return (f(x) - fE) / d;
    };
    const auto& rule = GaussLegendre::get(order);
    // split at E so each panel sees a smooth one-sided integrand
    double smooth = rule.integrate(sub, a, E) + rule.integrate(sub, E, b);
    return smooth + fE * std::log((E - a) / (b - E));
}

double pv_cauchy_line(const std::function<double(double)>& f, double E, double feature_scale,
                      int order) {
    const double R = std::max(4.0 * feature_scale, 1.0);
    // inner window: subtraction, symmetric log term vanishes
    const double fE = f(E);
    auto sub = [&](double x) {
        double d = E - x;
        if (std::abs(d) < 1e-14 * std::max(1.0, std::abs(E))) {
            double h = 1e-6 * std::max(1.0, std::abs(E));
            return -(f(E + h) - f(E - h)) / (2.0 * h);
        }
        return (f(x) - fE) / d;
    };
    const auto& rule = GaussLegendre::get(order);
    double inner = rule.integrate(sub, E - R, E) + rule.integrate(sub, E, E + R);
    // tails: x = E +- R/sin-free tan map; u in (0, pi/2), x = E + R*tan(u) etc.
    auto tail = [&](int sign) {
        auto g = [&](double u) {
            double t = std::tan(u);
            double x = E + sign * R * (1.0 + t);
            double jac = R / (std::cos(u) * std::cos(u));
            return f(x) / (E - x) * jac;
        };
        return rule.integrate(g, 0.0, 0.5 * M_PI * (1.0 - 1e-12));
    };
    return inner + tail(+1) + tail(-1);
}

cxd neville_to_zero(const std::vector<double>& xs, const std::vector<cxd>& ys, double* est_err) {
    if (xs.size() != ys.size() || xs.size() < 2)
        fail_config("neville_to_zero: need at least two samples");
    std::vector<cxd> prev = ys;
    cxd best = ys.back();
    double best_err = std::abs(ys[ys.size() - 1] - ys[ys.size() - 2]);
    const std::size_t n = xs.size();
    for (std::size_t lev = 1; lev < n; ++lev) {
        std::vector<cxd> cur(n - lev);
        for (std::size_t i = 0; i + lev < n; ++i) {
            cur[i] = (prev[i + 1] * xs[i] - prev[i] * xs[i + lev]) / (xs[i] - xs[i + lev]);
        }
        double est = std::abs(cur.back() - prev.back());
        if (est < best_err) {
            best_err = est;
            best = cur.back();
        }
        prev = std::move(cur);
    }
    if (est_err) *est_err = best_err;
    return best;
}

std::vector<cxd> legendre_oscillatory_moments(double theta, int kmax) {
    std::vector<cxd> out(kmax + 1);
    const double at = std::abs(theta);
    cxd mik = 1.0;  // (-i)^k running
    for (int k = 0; k <= kmax; ++k) {
        double jk = (at < 1e-300) ? (k == 0 ? 1.0 : 0.0) : std::sph_bessel(unsigned(k), at);
        // j_k(-x) = (-1)^k j_k(x) extends the formula to theta < 0
        if (theta < 0.0 && (k % 2 == 1)) jk = -jk;
        out[k] = 2.0 * mik * jk;
        mik *= cxd(0.0, -1.0);
    }
    return out;
}

}  // namespace specres
