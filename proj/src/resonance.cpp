#include "specres/resonance.hpp"

#include <cmath>

namespace specres {

cxd TaylorApproximant::eval(cxd z) const {
    const cxd u = z - center;
    cxd acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * u + *it;
    return acc;
}

cxd TaylorApproximant::eval_derivative(cxd z) const {
    const cxd u = z - center;
    cxd acc = 0.0;
    for (int k = int(coefficients.size()) - 1; k >= 1; --k)
        acc = acc * u + double(k) * coefficients[k];
    return acc;
}

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

bool disc_sample_ok(const TaylorApproximant& t, int samples) {
    for (int s = 0; s < samples; ++s) {
        double th = 2.0 * M_PI * s / samples;
        cxd z = t.lambda + 0.5 * t.radius_r * cxd(std::cos(th), std::sin(th));
        cxd f = t.eval(z);
        if (!(std::abs(f) <= t.sup_bound * (1.0 + 1e-12))) return false;
        if (!(-f.imag() > 0.0)) return false;
    }
    return true;
}

}  // namespace

TaylorApproximant build_taylor(const BoundaryTrace& trace, double lambda1, int n, double r,
                               const TaylorOptions& opts) {
    if (n < 0) fail_config("build_taylor: n >= 0 required");
    if (n + 1 > int(trace.deriv_series.size()))
        fail_config("build_taylor: trace does not carry enough derivatives");
    if (!trace.interval_I.strictly_contains(lambda1))
        fail_config("build_taylor: lambda1 must lie in the interior of the trace interval");

    TaylorApproximant t;
    t.center = lambda1;
    t.lambda = trace.lambda_ref;
    t.radius_r = r;
    t.coefficients.resize(n + 1);
    t.coefficients[0] = trace.value_at(lambda1);
    for (int k = 1; k <= n; ++k)
        t.coefficients[k] = trace.derivative_at(lambda1, k) / factorial(k);

    auto record_bound = [&]() {
        double rho = t.radius_r + std::abs(lambda1 - t.lambda);
        double c = 0.0, rp = 1.0;
        for (const auto& ck : t.coefficients) {
            c += std::abs(ck) * rp;
            rp *= rho;
        }
        t.sup_bound = c;
    };
    record_bound();
    if (!disc_sample_ok(t, opts.disc_samples)) {
        if (opts.retry_shrink) {
            t.radius_r *= 0.5;
            record_bound();
            if (disc_sample_ok(t, opts.disc_samples)) return t;
        }
        fail_contract("build_taylor: -Im F_n not positive on the sample circle "
                      "(r too large or Gamma too small)");
    }
    return t;
}

Resonance find_resonance(const TaylorApproximant& approx, double kappa,
                         const RootOptions& opts) {
    Resonance res;
    res.kappa = kappa;
    const double k2 = kappa * kappa;
    const double tol = opts.tol_scale * std::max(1.0, std::abs(approx.lambda));

    if (kappa == 0.0) {
        res.lambda_res = approx.center;
        res.amplitude = 1.0;
        res.iterations = 0;
        return res;
    }

    // contraction bound kappa^2 sup |F_n'| over U_r
    double sup_fp = 0.0;
    {
        double rho = approx.radius_r + std::abs(approx.center - approx.lambda);
        double rp = 1.0;
        for (int k = 1; k <= approx.order(); ++k) {
            sup_fp += double(k) * std::abs(approx.coefficients[k]) * rp;
            rp *= rho;
        }
    }
    const double contraction = k2 * sup_fp;

    cxd z = approx.center;
    int it = 0;
    bool converged = false;
    for (; it < opts.max_fixed_point; ++it) {
        cxd zn = approx.center + k2 * approx.eval(z);
        if (std::abs(zn - approx.lambda) > approx.radius_r)
            fail_convergence("find_resonance: iterate left U_r (kappa too large)");
        if (std::abs(zn - z) <= tol) {
            z = zn;
            converged = true;
            ++it;
            break;
        }
        z = zn;
    }
    if (!converged) {
        if (contraction >= 1.0)
            fail_convergence("find_resonance: contraction factor >= 1 (kappa too large)");
        for (int nit = 0; nit < opts.max_newton; ++nit) {
            cxd h = z - approx.center - k2 * approx.eval(z);
            cxd dh = 1.0 - k2 * approx.eval_derivative(z);
            cxd zn = z - h / dh;
            ++it;
            if (std::abs(zn - z) <= tol) {
                z = zn;
                converged = true;
                break;
            }
            z = zn;
        }
        if (!converged) fail_convergence("find_resonance: root iteration did not converge");
    }
    if (z.imag() > 10.0 * tol)
        fail_contract("find_resonance: Im lambda_kappa > 0 (positivity of -Im F_n breached)");

    res.lambda_res = z;
    res.amplitude = 1.0 / (1.0 - k2 * approx.eval_derivative(z));
    res.iterations = it;
    return res;
}

double expansion_gap(const Resonance& res, const BoundaryTrace& trace_at_zero, double lambda,
                     double phi_V_phi) {
    if (trace_at_zero.kappa != 0.0)
        fail_config("expansion_gap: requires the kappa = 0 trace");
    const cxd f0 = trace_at_zero.value_at(lambda);
    const cxd predicted = lambda + res.kappa * phi_V_phi + res.kappa * res.kappa * f0;
    return std::abs(res.lambda_res - predicted);
}

double expansion_slope(const std::vector<Resonance>& ladder) {
    std::vector<double> xs, ys;
    for (const auto& r : ladder) {
        if (r.kappa > 0.0 && std::isfinite(r.expansion_gap) && r.expansion_gap > 0.0) {
            xs.push_back(std::log(r.kappa));
            ys.push_back(std::log(r.expansion_gap));
        }
    }
    if (xs.size() < 3) fail_config("expansion_slope: need >= 3 ladder points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = num / den;
    if (slope < 2.2)
        fail_contract("expansion_slope: gap slope below 2.2 -- second-order expansion "
                      "not confirmed");
    return slope;
}

int winding_number(const TaylorApproximant& approx, double kappa, double r_prime,
                   int samples) {
    const double k2 = kappa * kappa;
    auto h = [&](double th) {
        cxd z = approx.lambda + r_prime * cxd(std::cos(th), std::sin(th));
        return approx.center + k2 * approx.eval(z) - z;
    };
    double total = 0.0;
    cxd prev = h(0.0);
    for (int s = 1; s <= samples; ++s) {
        cxd cur = h(2.0 * M_PI * s / samples);
        total += std::arg(cur / prev);
        prev = cur;
    }
    return int(std::lround(total / (2.0 * M_PI)));
}

}  // namespace specres
