#pragma once

#include "specres/common.hpp"
#include "specres/feshbach.hpp"
#include "specres/models.hpp"
#include "specres/resonance.hpp"

#include <vector>

namespace specres {

/// Smooth energy cutoff: 1 on the plateau [p,q], 0 outside [a,b], glued with the
/// standard exp(-1/x) step on the transition bands.
struct Cutoff {
    double a = 0.0, p = 0.0, q = 0.0, b = 0.0;
    std::vector<double> derivative_bounds;  // recorded sup |g^(k)|, k = 0..4

    double operator()(double mu) const;
    Interval support() const { return {a, b}; }
    Interval plateau() const { return {p, q}; }
};

Cutoff make_cutoff(Interval I, double lambda, double plateau_halfwidth);

enum class SurvivalSource { SpectralIntegral, DirectPropagation };

struct SurvivalSeries {
    VectorXd times;
    VectorXcd values;
    SurvivalSource source = SurvivalSource::SpectralIntegral;
    double kappa = 0.0;
};

struct SurvivalOptions {
    double panel_tol = 1e-13;  // relative interpolation tolerance per panel
    int max_depth = 48;
    int scan_points = 1024;    // spike search resolution
};

/// S(t) = (1/pi) \int e^{-i mu t} g(mu) Im (B(mu+i0,kappa)-mu)^{-1} d mu,
/// evaluated with adaptive Legendre-Filon panels (the oscillatory factor is
/// integrated exactly against a degree-16 panel interpolant of the density).
/// kappa = 0 returns the exact limit g(lambda1) e^{-i lambda1 t}.
SurvivalSeries survival_spectral(const BoundaryTrace& trace, const ReducedFunction& reduced,
                                 const Cutoff& g, const VectorXd& times,
                                 const SurvivalOptions& opts = {});

/// S(t) = sum_j |<phi, psi_j>|^2 g(E_j) e^{-i E_j t} from a full eigendecomposition
/// of H_kappa. Rejects times beyond the recurrence horizon of the discretization.
SurvivalSeries survival_direct(const MatrixModel& model, const Cutoff& g, double kappa,
                               const VectorXd& times);

struct RemainderSups {
    double sup_abs = 0.0;       // sup_t |b|
    double sup_weighted_n = 0.0;    // sup_t (1+t)^n |b|
    double sup_weighted_nm1 = 0.0;  // sup_t (1+t)^{n-1} |b|
};

/// b(kappa,t) = S(t) - a(kappa) e^{-i lambda_kappa t} and its weighted sups.
RemainderSups remainder_decompose(const SurvivalSeries& series, const Resonance& res, int n);

/// L1(I) norms of r_n^{(j)}, j = 0..n, where
/// r_n = (B(E+i0,kappa)-E)^{-1} - (B_n(E,kappa)-E)^{-1}.
std::vector<double> rn_l1_norms(const BoundaryTrace& trace, const TaylorApproximant& approx,
                                const ReducedFunction& reduced, double abs_tol = 1e-11);

struct DecayFit {
    cxd amplitude;   // a-tilde
    cxd lambda_fit;  // lambda-tilde
    double tau_estimate = 0.0;
    int window_points = 0;
};

/// Weighted linear least squares of the unwrapped log S(t) on t in
/// [0.1 tau, 1.5 tau] with |S|^2 weights.
DecayFit fit_decay(const SurvivalSeries& series);

struct LogRatioBound {
    double lhs = 0.0;  // dist(log(w1/w2), 2 pi i Z)
    double rhs = 0.0;  // (2+pi)/2 * |w1-w2| / min(|w1|,|w2|)
    bool holds() const { return lhs <= rhs * (1.0 + 1e-12); }
};

LogRatioBound log_ratio_bound(cxd w1, cxd w2);

/// Smallest C with |(B(E+i0,kappa)-E)^{-1}| <= C |lambda1-E + i kappa^2 Im F(lambda)|^{-1}
/// over I (dense scan refined near lambda1).
double ghat_domination_constant(const BoundaryTrace& trace, const ReducedFunction& reduced);

}  // namespace specres
