#include "specres/decay.hpp"

#include "specres/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace specres {

namespace {

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ea = std::exp(-1.0 / x);
    const double eb = std::exp(-1.0 / (1.0 - x));
    return ea / (ea + eb);
}

}  // namespace

double Cutoff::operator()(double mu) const {
    return smooth_step((mu - a) / (p - a)) * smooth_step((b - mu) / (b - q));
}

Cutoff make_cutoff(Interval I, double lambda, double plateau_halfwidth) {
    Cutoff g;
    g.a = I.lo;
    g.b = I.hi;
    g.p = lambda - plateau_halfwidth;
    g.q = lambda + plateau_halfwidth;
    if (!(g.a < g.p && g.q < g.b))
        fail_config("make_cutoff: plateau not strictly inside the support interval");

    // record sup |g^(k)| on the transition bands by repeated central differences
    g.derivative_bounds.assign(5, 0.0);
    g.derivative_bounds[0] = 1.0;
    auto record_band = [&](double lo, double hi) {
        const int m = 2001;
        const double h = (hi - lo) / (m - 1);
        std::vector<double> vals(m);
        for (int i = 0; i < m; ++i) vals[i] = g(lo + i * h);
        for (int k = 1; k <= 4; ++k) {
            std::vector<double> d(vals.size() - 2);
            for (std::size_t i = 1; i + 1 < vals.size(); ++i)
                d[i - 1] = (vals[i + 1] - vals[i - 1]) / (2.0 * h);
            double mx = 0.0;
            for (double v : d) mx = std::max(mx, std::abs(v));
            g.derivative_bounds[k] = std::max(g.derivative_bounds[k], mx);
            vals = std::move(d);
        }
    };
    record_band(g.a, g.p);
    record_band(g.q, g.b);
    return g;
}

namespace {

struct Panel {
    double a, b;
    std::vector<cxd> coeffs;  // Legendre coefficients of the density
};

constexpr int kPanelDegree = 16;

// Legendre values at the GL-17 nodes, built once.
struct PanelBasis {
    const GaussLegendre& rule = GaussLegendre::get(kPanelDegree + 1);
    std::vector<std::vector<double>> P;  // P[k][i]
    PanelBasis() {
        const auto& xs = rule.nodes;
        P.assign(kPanelDegree + 1, std::vector<double>(xs.size()));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double p0 = 1.0, p1 = xs[i];
            P[0][i] = 1.0;
            P[1][i] = xs[i];
            for (int k = 2; k <= kPanelDegree; ++k) {
                double p2 = ((2.0 * k - 1.0) * xs[i] * p1 - (k - 1.0) * p0) / k;
                P[k][i] = p2;
                p0 = p1;
                p1 = p2;
            }
        }
    }
    static const PanelBasis& get() {
        static PanelBasis basis;
        return basis;
    }
};

template <typename F>
std::vector<Panel> build_panels(F&& dens, double lo, double hi,
                                const std::vector<double>& seeds, double tol, int max_depth) {
    const auto& basis = PanelBasis::get();
    const auto& xs = basis.rule.nodes;
    const auto& ws = basis.rule.weights;

    struct Frame {
        double a, b;
        int depth;
    };
    std::vector<Frame> stack;
    // seed splits (spike locations) keep the adaptive pass from missing narrow features
    std::vector<double> cuts{lo};
    for (double s : seeds)
        if (s > lo && s < hi) cuts.push_back(s);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) stack.push_back({cuts[i], cuts[i + 1], 0});

    double fmax = 1e-300;
    std::vector<Panel> out;
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        Panel p;
        p.a = fr.a;
        p.b = fr.b;
        const double h = 0.5 * (fr.b - fr.a), m = 0.5 * (fr.a + fr.b);
        std::vector<double> fv(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) fv[i] = dens(m + h * xs[i]);
        for (double v : fv) fmax = std::max(fmax, std::abs(v));
        p.coeffs.assign(kPanelDegree + 1, cxd(0.0));
        for (int k = 0; k <= kPanelDegree; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) acc += ws[i] * basis.P[k][i] * fv[i];
            p.coeffs[k] = 0.5 * (2.0 * k + 1.0) * acc;
        }
        const double indicator =
            (std::abs(p.coeffs[kPanelDegree]) + std::abs(p.coeffs[kPanelDegree - 1])) *
            (fr.b - fr.a);
        if (indicator > tol * fmax && fr.depth < max_depth) {
            stack.push_back({fr.a, m, fr.depth + 1});
            stack.push_back({m, fr.b, fr.depth + 1});
        } else if (indicator > 1e3 * tol * fmax) {
            fail_convergence("survival_spectral: panel refinement cap hit near the "
                             "resonance peak");
        } else {
            out.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace

SurvivalSeries survival_spectral(const BoundaryTrace& trace, const ReducedFunction& reduced,
                                 const Cutoff& g, const VectorXd& times,
                                 const SurvivalOptions& opts) {
    if (trace.interval_I.lo > g.a || trace.interval_I.hi < g.b)
        fail_config("survival_spectral: trace does not cover the cutoff support");
    SurvivalSeries out;
    out.times = times;
    out.source = SurvivalSource::SpectralIntegral;
    out.kappa = reduced.kappa;
    out.values.resize(times.size());

    if (reduced.kappa == 0.0) {
        // delta limit of the spectral density at lambda1
        const double lam = reduced.lambda1;
        const double glam = g(lam);
        for (Eigen::Index i = 0; i < times.size(); ++i)
            out.values(i) = glam * std::exp(cxd(0.0, -lam * times(i)));
        return out;
    }

    auto dens = [&](double mu) {
        const cxd denom = reduced.effective_energy(mu) - mu;
        return (1.0 / M_PI) * g(mu) * std::imag(1.0 / denom);
    };
    // locate the quasi-pole: minimum of |B(mu)-mu| on a scan
    double spike = reduced.lambda1;
    double best = std::abs(reduced.effective_energy(spike) - spike);
    for (int s = 0; s <= opts.scan_points; ++s) {
        double mu = g.a + (g.b - g.a) * s / opts.scan_points;
        double v = std::abs(reduced.effective_energy(mu) - mu);
        if (v < best) {
            best = v;
            spike = mu;
        }
    }
    auto panels =
        build_panels(dens, g.a, g.b, {spike, g.p, g.q}, opts.panel_tol, opts.max_depth);

    for (Eigen::Index i = 0; i < times.size(); ++i) {
        const double t = times(i);
        cxd acc = 0.0;
        for (const auto& p : panels) {
            const double h = 0.5 * (p.b - p.a), m = 0.5 * (p.a + p.b);
            const auto moments = legendre_oscillatory_moments(h * t, kPanelDegree);
            cxd panel_sum = 0.0;
            for (int k = 0; k <= kPanelDegree; ++k) panel_sum += p.coeffs[k] * moments[k];
            acc += h * std::exp(cxd(0.0, -m * t)) * panel_sum;
        }
        out.values(i) = acc;
    }
    return out;
}

SurvivalSeries survival_direct(const MatrixModel& model, const Cutoff& g, double kappa,
                               const VectorXd& times) {
    VectorXd evals;
    VectorXd weights;  // |<phi, psi_j>|^2
    if (model.is_real_star()) {
        MatrixXd Hk = (model.H + kappa * model.V).real();
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(Hk);
        evals = es.eigenvalues();
        VectorXd phir = model.phi.real();
        weights = (es.eigenvectors().transpose() * phir).cwiseAbs2();
    } else {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(model.H_kappa(kappa));
        evals = es.eigenvalues();
        weights = (es.eigenvectors().adjoint() * model.phi).cwiseAbs2();
    }

    // recurrence horizon: largest adjacent level gap inside the cutoff support
    double max_gap = 0.0;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (Eigen::Index j = 0; j < evals.size(); ++j) {
        double e = evals(j);
        if (e < g.a || e > g.b) continue;
        if (!std::isnan(prev)) max_gap = std::max(max_gap, e - prev);
        prev = e;
    }
    if (max_gap > 0.0) {
        const double horizon = 2.0 * M_PI / max_gap;
        if (times.size() > 0 && times(times.size() - 1) > 0.5 * horizon)
            fail_config("survival_direct: requested times beyond the recurrence horizon "
                        "of the discretization");
    }

    SurvivalSeries out;
    out.times = times;
    out.source = SurvivalSource::DirectPropagation;
    out.kappa = kappa;
    out.values.resize(times.size());
    std::vector<double> gw(evals.size());
    for (Eigen::Index j = 0; j < evals.size(); ++j) gw[j] = weights(j) * g(evals(j));
    for (Eigen::Index i = 0; i < times.size(); ++i) {
        const double t = times(i);
        cxd acc = 0.0;
        for (Eigen::Index j = 0; j < evals.size(); ++j) {
            if (gw[j] == 0.0) continue;
            acc += gw[j] * std::exp(cxd(0.0, -evals(j) * t));
        }
        out.values(i) = acc;
    }
    return out;
}

RemainderSups remainder_decompose(const SurvivalSeries& series, const Resonance& res, int n) {
    RemainderSups sup;
    for (Eigen::Index i = 0; i < series.times.size(); ++i) {
        const double t = series.times(i);
        const cxd expected = res.amplitude * std::exp(-kImag * res.lambda_res * t);
        const double ab = std::abs(series.values(i) - expected);
        sup.sup_abs = std::max(sup.sup_abs, ab);
        sup.sup_weighted_n = std::max(sup.sup_weighted_n, std::pow(1.0 + t, n) * ab);
        sup.sup_weighted_nm1 = std::max(sup.sup_weighted_nm1, std::pow(1.0 + t, n - 1) * ab);
    }
    return sup;
}

namespace {

// G^{(j)} for j = 0..n from B-derivatives via k-fold differentiation of G*(B-E)=1.
std::vector<cxd> resolvent_derivs(const std::vector<cxd>& B_derivs, double E, int n) {
    std::vector<cxd> D(n + 1);
    D[0] = B_derivs[0] - E;
    if (n >= 1) D[1] = B_derivs[1] - 1.0;
    for (int k = 2; k <= n; ++k) D[k] = B_derivs[k];
    if (std::abs(D[0]) == 0.0)
        fail_contract("resolvent_derivs: B(E)-E vanished on the real axis "
                      "(Im F positivity breached)");
    std::vector<cxd> G(n + 1);
    G[0] = 1.0 / D[0];
    std::vector<double> binom(n + 1, 1.0);
    for (int k = 1; k <= n; ++k) {
        cxd s = 0.0;
        double c = 1.0;  // C(k, j) running
        for (int j = 0; j < k; ++j) {
            s += c * G[j] * D[k - j];
            c = c * double(k - j) / double(j + 1);
        }
        G[k] = -G[0] * s;
    }
    return G;
}

}  // namespace

std::vector<double> rn_l1_norms(const BoundaryTrace& trace, const TaylorApproximant& approx,
                                const ReducedFunction& reduced, double abs_tol) {
    const int n = approx.order();
    if (n > int(trace.deriv_series.size()))
        fail_config("rn_l1_norms: trace lacks the required derivatives");
    const double k2 = reduced.kappa * reduced.kappa;

    auto B_true = [&](double E) {
        std::vector<cxd> b(n + 1);
        b[0] = reduced.effective_energy(E);
        for (int k = 1; k <= n; ++k) b[k] = k2 * trace.derivative_at(E, k);
        return b;
    };
    auto B_taylor = [&](double E) {
        // derivatives of the polynomial B_n(E) = lambda1 + k2 * F_n(E)
        std::vector<cxd> b(n + 1, cxd(0.0));
        const auto& c = approx.coefficients;
        for (int d = 0; d <= n; ++d) {
            cxd s = 0.0;
            for (int k = int(c.size()) - 1; k >= d; --k) {
                double fall = 1.0;
                for (int j = 0; j < d; ++j) fall *= (k - j);
                s += c[k] * fall * std::pow(E - approx.center, double(k - d));
            }
            b[d] = k2 * s;
            if (d == 0) b[0] += reduced.lambda1;
        }
        return b;
    };

    std::vector<double> norms(n + 1, 0.0);
    const Interval I = trace.interval_I;
    for (int j = 0; j <= n; ++j) {
        auto integrand = [&](double E) {
            auto G = resolvent_derivs(B_true(E), E, n);
            auto Gn = resolvent_derivs(B_taylor(E), E, n);
            return std::abs(G[j] - Gn[j]);
        };
        // split at the quasi-pole so the adaptive pass resolves the spike
        norms[j] = adaptive_integrate(integrand, I.lo, reduced.lambda1, abs_tol) +
                   adaptive_integrate(integrand, reduced.lambda1, I.hi, abs_tol);
    }
    return norms;
}

DecayFit fit_decay(const SurvivalSeries& series) {
    const Eigen::Index K = series.times.size();
    if (K < 8) fail_config("fit_decay: series too short");
    const double s0 = std::abs(series.values(0));
    if (s0 == 0.0) fail_config("fit_decay: S(0) = 0");

    // lifetime estimate from the first e^{-1} crossing
    double tau = series.times(K - 1);
    bool crossed = false;
    for (Eigen::Index i = 1; i < K; ++i) {
        if (std::abs(series.values(i)) <= s0 * std::exp(-1.0)) {
            tau = series.times(i);
            crossed = true;
            break;
        }
    }
    const double wlo = crossed ? 0.1 * tau : series.times(0);
    const double whi = crossed ? 1.5 * tau : series.times(K - 1);

    // unwrapped complex log on the window, |S|^2 weights
    double sw = 0.0, swt = 0.0, swtt = 0.0;
    cxd swy = 0.0, swty = 0.0;
    double phase_acc = 0.0;
    cxd prev = series.values(0);
    int used = 0;
    for (Eigen::Index i = 0; i < K; ++i) {
        const cxd s = series.values(i);
        if (i > 0) {
            phase_acc += std::arg(s / prev);
            prev = s;
        } else {
            phase_acc = std::arg(s);
        }
        const double t = series.times(i);
        if (t < wlo || t > whi) continue;
        const double as = std::abs(s);
        if (as == 0.0) fail_config("fit_decay: S vanishes inside the fit window");
        const cxd logS(std::log(as), phase_acc);
        const double w = as * as;
        sw += w;
        swt += w * t;
        swtt += w * t * t;
        swy += w * logS;
        swty += w * t * logS;
        ++used;
    }
    if (used < 4) fail_config("fit_decay: fit window empty (kappa too large?)");
    const double det = sw * swtt - swt * swt;
    const cxd alpha = (swtt * swy - swt * swty) / det;
    const cxd beta = (sw * swty - swt * swy) / det;

    DecayFit fit;
    fit.amplitude = std::exp(alpha);
    fit.lambda_fit = kImag * beta;
    fit.tau_estimate = tau;
    fit.window_points = used;
    return fit;
}

LogRatioBound log_ratio_bound(cxd w1, cxd w2) {
    if (w1 == cxd(0.0) || w2 == cxd(0.0)) fail_config("log_ratio_bound: zero input");
    LogRatioBound out;
    const cxd L = std::log(w1 / w2);  // principal branch, Im in (-pi, pi]
    out.lhs = std::abs(L);
    out.rhs = 0.5 * (2.0 + M_PI) * std::abs(w1 - w2) / std::min(std::abs(w1), std::abs(w2));
    return out;
}

double ghat_domination_constant(const BoundaryTrace& trace, const ReducedFunction& reduced) {
    const double k2 = reduced.kappa * reduced.kappa;
    const double imF_at_lambda = trace.value_at(trace.lambda_ref).imag();
    const Interval I = trace.interval_I;
    auto ratio = [&](double E) {
        const cxd denom = reduced.effective_energy(E) - E;
        const cxd ghat_inv(reduced.lambda1 - E, k2 * imF_at_lambda);
        return std::abs(ghat_inv) / std::abs(denom);
    };
    double C = 0.0;
    const int coarse = 4096;
    for (int i = 0; i <= coarse; ++i) C = std::max(C, ratio(I.lo + I.width() * i / coarse));
    // refine near lambda1 where the two quasi-poles compete
    const double w = std::max(1e-6, 10.0 * k2 * std::abs(imF_at_lambda));
    for (int i = 0; i <= 2048; ++i) {
        double E = reduced.lambda1 - w + 2.0 * w * i / 2048;
        if (I.contains(E)) C = std::max(C, ratio(E));
    }
    return C;
}

}  // namespace specres
