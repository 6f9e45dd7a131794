#pragma once

#include "specres/chebyshev.hpp"
#include "specres/common.hpp"
#include "specres/models.hpp"

#include <optional>
#include <vector>

namespace specres {

/// Spectral factorization of the reduced operator P̄ H_kappa P̄ on Ran P̄,
/// cached so that many self-energy evaluations cost O(N) each.
struct ReducedSpectral {
    VectorXd evals;    // eigenvalues of the reduced operator
    VectorXd weights;  // |<eigvec, P̄ V phi>|^2
    double level_spacing = 0.0;  // median adjacent spacing (discretization scale)

    cxd self_energy(cxd z) const;
    static ReducedSpectral build(const MatrixModel& model, double kappa);
};

enum class TraceMethod { ClosedForm, PvQuadrature, EtaExtrapolation };

/// F(E+i0,kappa) sampled on a compact interval I containing lambda, with
/// E-derivatives up to order n+1 and the interpolant used to evaluate both
/// anywhere on I.
struct BoundaryTrace {
    Interval interval_I;
    double kappa = 0.0;
    int n = 2;
    TraceMethod method = TraceMethod::ClosedForm;
    double lambda_ref = 0.0;  // the embedded eigenvalue of the source model

    VectorXd grid;                     // strictly increasing energies in I
    VectorXcd values;                  // F(E_j + i0, kappa)
    std::vector<VectorXcd> derivatives;  // k = 1..n+1

    ChebyshevSeries interpolant;                  // F on I
    std::vector<ChebyshevSeries> deriv_series;    // d^k F, k = 1..n+1
    double c_bound = 0.0;       // max_k sup_grid |d^k F| (uniform-boundedness record)
    double eta_error = 0.0;     // extrapolation error estimate (matrix models)

    cxd value_at(double E) const { return interpolant(E); }
    cxd derivative_at(double E, int k) const;
};

/// B(z,kappa) = lambda1(kappa) + kappa^2 F(z,kappa) evaluated on the real axis
/// through the trace interpolant.
struct ReducedFunction {
    double lambda1 = 0.0;  // lambda + kappa*(phi,V phi)
    double kappa = 0.0;
    ChebyshevSeries F_on_axis;

    cxd effective_energy(double E) const { return lambda1 + kappa * kappa * F_on_axis(E); }
};

/// Compression of a matrix (or vector) to an orthonormal basis of Ran P̄.
/// When phi is exactly a coordinate vector the basis is the remaining
/// coordinates and the compression is a row/column drop; otherwise a
/// Householder completion of phi is used.
MatrixXcd reduce_to_pbar(const MatrixXcd& M, const VectorXcd& phi);
VectorXcd reduce_to_pbar(const VectorXcd& v, const VectorXcd& phi);

/// F(z,kappa) = (phi, V P̄ (z - Ĥ_kappa)^{-1} P̄ V phi), Im z != 0, by dense solve
/// in an orthonormal basis of Ran P̄.
cxd self_energy(const MatrixModel& model, cxd z, double kappa);
cxd self_energy(const FriedrichsModel& model, cxd z, double kappa);

struct TraceOptions {
    int grid_points = 129;
    int degree = 128;          // interpolation degree (closed-form / PV)
    int matrix_grid_points = 33;
    int matrix_fit_degree = 16;
    double eta0_spacing_factor = 50.0;  // eta_0 = factor * level spacing
    int eta_halvings = 6;
    double eta_floor_factor = 2.5;      // drop rungs below factor * spacing
};

BoundaryTrace boundary_trace(const FriedrichsModel& model, Interval I, double kappa, int n,
                             TraceMethod method, const TraceOptions& opts = {});
BoundaryTrace boundary_trace(const MatrixModel& model, Interval I, double kappa, int n,
                             const TraceOptions& opts = {});

ReducedFunction make_reduced(const BoundaryTrace& trace, double lambda, double phi_V_phi);

/// Fermi-Golden-Rule width from a kappa=0 trace: Gamma = -2 Im F(lambda+i0,0).
/// Fails the pipeline when Gamma <= 0.
double golden_rule_width(const BoundaryTrace& trace_at_zero, double lambda);

/// |(phi,(z-H_kappa)^{-1} phi)^{-1} - (z - B(z,kappa))| by dense solves.
double feshbach_identity_residual(const MatrixModel& model, cxd z, double kappa);

}  // namespace specres
