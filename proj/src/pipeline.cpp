#include "specres/pipeline.hpp"

#include <cmath>
#include <future>

namespace specres {

VectorXd time_grid(double t_max, int count) {
    VectorXd ts(count);
    for (int i = 0; i < count; ++i) {
        double u = double(i) / (count - 1);
        ts(i) = t_max * u * u;
    }
    return ts;
}

double lifetime(double kappa, double gamma) { return 2.0 / (kappa * kappa * gamma); }

SweepRecord run_single_kappa(const FriedrichsModel& model, const BoundaryTrace& trace_at_zero,
                             double gamma, double kappa, const SweepOptions& opts) {
    if (!(kappa > 0.0)) fail_config("run_single_kappa: kappa must be positive");
    const Interval I = opts.interval;
    const double lambda = model.lambda;
    const double vphi = model.phi_V_phi();

    BoundaryTrace tr = boundary_trace(model, I, kappa, opts.n, opts.method);
    ReducedFunction reduced = make_reduced(tr, lambda, vphi);
    const double r = 0.5 * std::min(lambda - I.lo, I.hi - lambda);

    TaylorApproximant taylor = build_taylor(tr, reduced.lambda1, opts.n, r);
    SweepRecord rec;
    rec.kappa = kappa;
    rec.res = find_resonance(taylor, kappa);
    rec.res.gamma_fgr = gamma;
    rec.res.expansion_gap = expansion_gap(rec.res, trace_at_zero, lambda, vphi);
    rec.winding = winding_number(taylor, kappa, 0.5 * r);

    Cutoff g = make_cutoff(I, lambda, opts.plateau_halfwidth);
    const double tau = lifetime(kappa, gamma);
    rec.survival =
        survival_spectral(tr, reduced, g, time_grid(opts.time_max_tau * tau, opts.time_count));
    rec.sups = remainder_decompose(rec.survival, rec.res, opts.n);
    rec.fit = fit_decay(rec.survival);

    rec.rn_norms = rn_l1_norms(tr, taylor, reduced);
    TaylorApproximant taylor0 = build_taylor(tr, reduced.lambda1, 0, r);
    rec.rn_order0_norm = rn_l1_norms(tr, taylor0, reduced)[0];

    rec.ghat_C = ghat_domination_constant(tr, reduced);
    const double im = std::abs(rec.res.lambda_res.imag());
    rec.uniqueness_C =
        std::abs(rec.res.lambda_res - rec.fit.lambda_fit) / (kappa * kappa * std::max(im, 1e-300));
    return rec;
}

SweepResult run_sweep(const FriedrichsModel& model, const std::vector<double>& ladder,
                      const SweepOptions& opts) {
    if (ladder.empty()) fail_config("run_sweep: empty kappa ladder");
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i)
        if (!(ladder[i + 1] < ladder[i]))
            fail_config("run_sweep: kappa ladder must be strictly decreasing");

    SweepResult out;
    out.trace_at_zero = boundary_trace(model, opts.interval, 0.0, opts.n, opts.method);
    out.gamma = golden_rule_width(out.trace_at_zero, model.lambda);

    out.records.resize(ladder.size());
    if (opts.jobs > 1) {
        std::vector<std::future<SweepRecord>> futs;
        futs.reserve(ladder.size());
        for (double k : ladder)
            futs.push_back(std::async(std::launch::async, [&, k] {
                return run_single_kappa(model, out.trace_at_zero, out.gamma, k, opts);
            }));
        for (std::size_t i = 0; i < futs.size(); ++i) out.records[i] = futs[i].get();
    } else {
        for (std::size_t i = 0; i < ladder.size(); ++i)
            out.records[i] =
                run_single_kappa(model, out.trace_at_zero, out.gamma, ladder[i], opts);
    }
    return out;
}

double loglog_slope(const std::vector<double>& kappas, const std::vector<double>& values) {
    if (kappas.size() != values.size() || kappas.size() < 3)
        fail_config("loglog_slope: need >= 3 points");
    double mx = 0.0, my = 0.0;
    const std::size_t n = kappas.size();
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::log(kappas[i]);
        ys[i] = std::log(values[i]);
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

LogModelComparison compare_log_model(const std::vector<double>& kappas,
                                     const std::vector<double>& values, double pmin,
                                     double pmax, int steps) {
    if (kappas.size() != values.size() || kappas.size() < 3)
        fail_config("compare_log_model: need >= 3 points");
    const std::size_t n = kappas.size();
    auto residual_for = [&](auto&& predictor) {
        // fit the constant offset, return the sum of squared residuals
        double mean = 0.0;
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = std::log(values[i]) - predictor(kappas[i]);
            mean += d[i];
        }
        mean /= n;
        double ss = 0.0;
        for (double v : d) ss += (v - mean) * (v - mean);
        return ss;
    };
    LogModelComparison cmp;
    cmp.log_model_residual = residual_for([](double k) {
        return 2.0 * std::log(k) + std::log(std::abs(std::log(k)));
    });
    cmp.best_power_residual = std::numeric_limits<double>::max();
    for (int s = 0; s < steps; ++s) {
        const double p = pmin + (pmax - pmin) * s / (steps - 1);
        const double r = residual_for([p](double k) { return p * std::log(k); });
        if (r < cmp.best_power_residual) {
            cmp.best_power_residual = r;
            cmp.best_power = p;
        }
    }
    return cmp;
}

}  // namespace specres
