#pragma once

#include "specres/common.hpp"
#include "specres/models.hpp"

#include <string>
#include <vector>

namespace specres {

/// Iterated commutators of H and V with A in the Hermitian convention
/// T_0 = H, T_k = i[T_{k-1}, A]; the plain convention ad^k = (-i)^k T_k.
struct CommutatorLedger {
    MatrixXcd H, V, A;  // source operators
    std::vector<MatrixXcd> ads_H;  // T_k(H), k = 0..nu
    std::vector<MatrixXcd> ads_V;  // T_k(V)
    int nu = 0;
    // relative bounds ||T_k psi|| <= a_k ||H psi|| + b_k ||psi|| via the
    // generalized eigenproblem T_k^2 psi = mu (H^2 + 1) psi, a_k = b_k = sqrt(mu_max)
    std::vector<double> a_H, b_H, a_V, b_V;
};

CommutatorLedger build_ledger(const MatrixModel& model, int nu);

/// i[X,Y] with structure-exploiting fast paths (diagonal X elementwise; real
/// symmetric X with purely imaginary Y through real products).
MatrixXcd commutator_i(const MatrixXcd& X, const MatrixXcd& Y);

/// Bounded regularization eps^{-1} arctan(eps A) by functional calculus.
MatrixXcd arctan_regularized(const MatrixXcd& A, double eps);

/// Same object from its resolvent-integral representation; the integral over
/// [1,inf) is mapped to (0,1] by t = 1/u and integrated with Gauss-Legendre.
MatrixXcd arctan_regularized_integral(const MatrixXcd& A, double eps, int order = 128);

struct IdentityResidual {
    std::string name;
    double residual = 0.0;
    double scale = 1.0;
    double tol = 0.0;
    bool pass() const { return residual <= tol * scale; }
};

/// Residuals of the commutator-calculus identities (resolvent expansions, the
/// arctan representation, the binomial/adjoint expansions and the odd-power
/// identity) evaluated as matrices.
std::vector<IdentityResidual> commutator_identities_check(const CommutatorLedger& ledger,
                                                          double eps, int n);

/// |(phi, i[H_kappa, A] phi)| for the eigenvector of H_kappa closest to lambda
/// (phi of the model at kappa = 0).
double virial_residual(const MatrixModel& model, double kappa);

struct MourreCertificate {
    Interval delta;
    double kappa = 0.0;
    bool reduced = false;
    double theta = 0.0;            // min eigenvalue of the probe compression
    double theta_target = 0.0;
    int deficiency_rank = 0;       // probe-compression eigenvalues below theta_target
    double exact_compression_min = 0.0;  // min eigenvalue on the exact spectral subspace
    int probe_count = 0;
    double sigma = 0.0;            // probe energy resolution
    std::vector<double> probe_eigenvalues;
};

struct CertificateOptions {
    int probes = 16;
    double sigma_fraction = 0.125;  // sigma = fraction * |Delta|
    double theta_target = -1.0;     // < 0: caller supplies the reduced kappa=0 theta / 2
    bool include_channel_probe = true;  // unreduced: add the energy-localized phi probe
};

/// Commutator positivity on Delta, tested two ways: the exact compression onto
/// the spectral subspace (always reported; its min eigenvalue is <= 0 in finite
/// dimension by the virial theorem) and the certifying compression onto smooth
/// energy-localized probe packets, which is the finite surrogate of the
/// continuum estimate. Reduced certificates act on P̄ H_kappa P̄ with P̄ A P̄.
MourreCertificate mourre_certificate(const MatrixModel& model, Interval delta, bool reduced,
                                     double kappa, const CertificateOptions& opts = {});

/// Residual of ad^{(j)} of the reduced pair against P̄ ad^{(j)}(H) P̄ + G_j with
/// G_j assembled recursively from A^{j1} ad^{(j2)} P blocks.
double reduced_commutator_residual(const MatrixModel& model, double kappa, int j);

}  // namespace specres
