#pragma once

#include "specres/decay.hpp"
#include "specres/feshbach.hpp"
#include "specres/models.hpp"
#include "specres/resonance.hpp"

#include <vector>

namespace specres {

struct SweepOptions {
    Interval interval{-0.5, 0.5};
    int n = 2;
    double plateau_halfwidth = 0.2;
    double time_max_tau = 3.0;
    int time_count = 601;
    TraceMethod method = TraceMethod::ClosedForm;
    int jobs = 1;
};

/// Everything computed for one ladder entry.
struct SweepRecord {
    double kappa = 0.0;
    Resonance res;
    RemainderSups sups;
    DecayFit fit;
    std::vector<double> rn_norms;   // order-n approximant, j = 0..n
    double rn_order0_norm = 0.0;    // j = 0 norm of the order-0 approximant
    double ghat_C = 0.0;
    double uniqueness_C = 0.0;
    int winding = 0;
    SurvivalSeries survival;
};

struct SweepResult {
    BoundaryTrace trace_at_zero;
    double gamma = 0.0;
    std::vector<SweepRecord> records;
};

/// Quadratically clustered time grid on [0, t_max] (dense at early times).
VectorXd time_grid(double t_max, int count);

double lifetime(double kappa, double gamma);  // tau = 2/(kappa^2 Gamma)

SweepRecord run_single_kappa(const FriedrichsModel& model, const BoundaryTrace& trace_at_zero,
                             double gamma, double kappa, const SweepOptions& opts);

SweepResult run_sweep(const FriedrichsModel& model, const std::vector<double>& ladder,
                      const SweepOptions& opts);

/// Least-squares slope of log(values) against log(kappas).
double loglog_slope(const std::vector<double>& kappas, const std::vector<double>& values);

struct LogModelComparison {
    double log_model_residual = 0.0;
    double best_power_residual = 0.0;
    double best_power = 0.0;
    bool log_model_wins() const { return log_model_residual < best_power_residual; }
};

/// Residual comparison of y ~ C kappa^2 |log kappa| against y ~ C kappa^p for
/// p on a grid in [pmin, pmax].
LogModelComparison compare_log_model(const std::vector<double>& kappas,
                                     const std::vector<double>& values, double pmin = 2.0,
                                     double pmax = 2.3, int steps = 13);

}  // namespace specres
