#pragma once

#include "specres/common.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace specres {

/// Closed-form spectral coupling density |v(x)|^2.
struct CouplingDensity {
    enum class Kind { Lorentzian, Semicircle, Polynomial };

    Kind kind = Kind::Lorentzian;
    // lorentzian {g, x0, w}: |v|^2 = (g^2/pi) * w / ((x-x0)^2 + w^2), support R
    // semicircle {g, center, radius}: |v|^2 = g^2 * (2/(pi r^2)) sqrt(r^2-(x-c)^2)
    // polynomial {coefficients on [a,b]}: |v|^2 = sum c_k x^k on [a,b], 0 outside
    double g = 1.0;
    double x0 = 0.0;
    double w = 1.0;
    double center = 0.0;
    double radius = 1.0;
    std::vector<double> coefficients;
    double poly_a = -1.0, poly_b = 1.0;

    double operator()(double x) const;
    double total_mass() const;  // \int |v|^2
    bool compactly_supported() const { return kind != Kind::Lorentzian; }
    Interval compact_support() const;  // valid when compactly_supported()

    /// Stieltjes transform \int |v(x)|^2/(z-x) dx for Im z >= 0 (boundary value
    /// from above when z is real inside the support).
    cxd stieltjes_upper(cxd z) const;
};

/// Exactly solvable continuum model: one discrete level at `lambda` coupled to a
/// continuum through `coupling`, plus a rank-one diagonal part diag_shift*|phi><phi|.
struct FriedrichsModel {
    double lambda = 0.0;
    CouplingDensity coupling;
    bool unbounded_support = false;
    Interval support;       // continuum support (bounded case)
    double truncation_L = 8.0;  // half-width of the truncation box (unbounded case)
    double diag_shift = 0.0;

    Interval truncated_support() const {
        return unbounded_support ? Interval{-truncation_L, truncation_L} : support;
    }
    /// F(z,kappa) for Im z >= 0. The coupling is purely off-diagonal so the
    /// reduced resolvent does not see kappa: F(z,kappa) = F(z,0).
    cxd self_energy_upper(cxd z) const { return coupling.stieltjes_upper(z); }
    double phi_V_phi() const { return diag_shift; }
};

struct FriedrichsSpec {
    double lambda = 0.0;
    CouplingDensity coupling;
    bool unbounded_support = false;
    Interval support{-1.0, 1.0};
    double truncation_L = 8.0;
    double diag_shift = 0.0;
};

/// Finite Hermitian realization: H, V, A complex Hermitian, phi a unit eigenvector
/// of H with eigenvalue lambda.
struct MatrixModel {
    MatrixXcd H;
    MatrixXcd V;
    MatrixXcd A;
    VectorXcd phi;
    double lambda = 0.0;

    Eigen::Index size() const { return H.rows(); }
    MatrixXcd H_kappa(double kappa) const { return H + kappa * V; }
    double phi_V_phi() const { return (phi.adjoint() * V * phi)(0).real(); }
    /// True when H, V are real and A is purely imaginary (star models); enables
    /// real-symmetric eigensolver paths.
    bool is_real_star() const;
};

struct Projections {
    MatrixXcd P;
    MatrixXcd Pbar;
};

/// Validate parameters and construct the continuum model. Rejects a lambda that
/// is not embedded in the continuum and densities that are negative or massless.
FriedrichsModel build_friedrichs(const FriedrichsSpec& spec);

/// Truncation half-width needed for tail mass below tol*total (closed form for
/// the Lorentzian; support edge for compact couplings).
double default_truncation(const CouplingDensity& coupling, double tol = 1e-8);

/// Star discretization on N uniform grid points over the (truncated) support:
/// H = diag(lambda, x_1..x_N), V couples the level to sqrt(dx)*v(x_i) plus the
/// diagonal shift, A = (i/2)(XD + DX) on the continuum block (D = central
/// difference), phi = e_0.
MatrixModel discretize(const FriedrichsModel& model, int N);

Projections projections(const MatrixModel& model);

/// Random dense Hermitian model of the given size with a known eigenpair
/// (phi, lambda) of H taken from an exact eigendecomposition; V, A independent
/// random Hermitian. Deterministic in the seed.
MatrixModel random_matrix_model(int size, std::uint64_t seed);

/// Smoothed spectral density of the coupling row at energy E:
///   sum_i |V_{0i}|^2 * (eta/pi) / ((E-x_i)^2 + eta^2),
/// which converges to |v(E)|^2 on the grid-refinement/eta ladder.
double smoothed_coupling_density(const MatrixModel& model, double E, double eta);

}  // namespace specres
