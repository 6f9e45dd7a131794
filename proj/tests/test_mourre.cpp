#include "specres/mourre.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace specres;

namespace {

FriedrichsModel mourre_reference() {
    FriedrichsSpec spec;
    spec.lambda = 1.0;
    spec.unbounded_support = true;
    spec.truncation_L = 8.0;
    spec.coupling.kind = CouplingDensity::Kind::Lorentzian;
    spec.coupling.g = 1.0;
    spec.coupling.x0 = 1.0;
    spec.coupling.w = 1.0;
    return build_friedrichs(spec);
}

}  // namespace

TEST_CASE("ledger: commuting pair has vanishing higher commutators") {
    MatrixModel m = random_matrix_model(8, 5);
    m.A = m.H;  // [H, H] = 0
    CommutatorLedger led = build_ledger(m, 4);
    for (int k = 1; k <= 4; ++k) CHECK(led.ads_H[k].norm() < 1e-12 * m.H.norm());
}

TEST_CASE("ledger: second order matches the direct double-commutator expansion") {
    MatrixModel m = random_matrix_model(6, 17);
    CommutatorLedger led = build_ledger(m, 2);
    // plain ad^2 = HAA - 2AHA + AAH; ledger stores i^2 ad^2 = -ad^2
    MatrixXcd direct = m.H * m.A * m.A - 2.0 * m.A * m.H * m.A + m.A * m.A * m.H;
    CHECK((led.ads_H[2] + direct).norm() < 1e-12 * direct.norm());
    for (int k = 0; k <= 2; ++k) CHECK(hermiticity_residual(led.ads_H[k]) == 0.0);
    CHECK(led.a_H.size() == 3);
    CHECK(led.a_H[1] > 0.0);
}

TEST_CASE("star dilation generator: i[H,A] acts like multiplication by x on packets") {
    FriedrichsModel fm = mourre_reference();
    MatrixModel m = discretize(fm, 800);
    const MatrixXcd T1 = commutator_i(m.H, m.A);
    // gaussian packet centered at x0 = 1 in position space
    VectorXcd f = VectorXcd::Zero(m.size());
    for (Eigen::Index i = 1; i < m.size(); ++i) {
        double x = m.H(i, i).real();
        f(i) = std::exp(-0.5 * (x - 1.0) * (x - 1.0) / (0.3 * 0.3));
    }
    f /= f.norm();
    const double form = (f.adjoint() * T1 * f)(0).real();
    double xbar = 0.0;
    for (Eigen::Index i = 1; i < m.size(); ++i)
        xbar += m.H(i, i).real() * std::norm(f(i));
    CHECK(form == doctest::Approx(xbar).epsilon(0.02));
    CHECK(form > 0.5);
}

TEST_CASE("arctan regularization: functional calculus, rates, commutation") {
    MatrixModel m = random_matrix_model(10, 23);
    const MatrixXcd& A = m.A;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(A);

    const double eps = 0.2;
    MatrixXcd Aeps = arctan_regularized(A, eps);
    // eigenvalue mapping
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es2(Aeps);
    VectorXd mapped = es.eigenvalues();
    for (Eigen::Index i = 0; i < mapped.size(); ++i)
        mapped(i) = std::atan(eps * mapped(i)) / eps;
    std::sort(mapped.data(), mapped.data() + mapped.size());
    CHECK((es2.eigenvalues() - mapped).norm() < 1e-10 * A.norm());

    // eps -> 0 convergence at rate eps^2 ||A||^3 (scalar Taylor of arctan)
    double prev = std::numeric_limits<double>::max();
    for (double e : {0.2, 0.1, 0.05}) {
        MatrixXcd Ae = arctan_regularized(A, e);
        double err = (Ae - A).norm();
        CHECK(err < prev);
        double amax = es.eigenvalues().cwiseAbs().maxCoeff();
        CHECK(err <= (e * e / 3.0) * std::pow(amax, 3) * std::sqrt(double(A.rows())));
        prev = err;
    }

    // two-route agreement and commutation with A
    CHECK((Aeps - arctan_regularized_integral(A, eps)).norm() < 1e-6 * A.norm());
    CHECK((Aeps * A - A * Aeps).norm() < 1e-12 * A.norm() * A.norm());
}

TEST_CASE("commutator identity residuals on random triples") {
    std::mt19937_64 seeds(2024);
    for (int rep = 0; rep < 5; ++rep) {
        const int size = 4 + int(seeds() % 9);
        MatrixModel m = random_matrix_model(size, seeds());
        CommutatorLedger led = build_ledger(m, 6);
        for (int n : {1, 2, 3}) {
            auto res = commutator_identities_check(led, 0.1, n);
            for (const auto& r : res) {
                INFO(r.name, " n=", n, " residual=", r.residual, " scale=", r.scale);
                CHECK(r.pass());
            }
        }
    }
}

TEST_CASE("binomial expansion with n = 1 is the definition of the commutator") {
    MatrixModel m = random_matrix_model(7, 77);
    CommutatorLedger led = build_ledger(m, 3);
    auto res = commutator_identities_check(led, 0.1, 1);
    for (const auto& r : res)
        if (r.name == "binomial-expansion") CHECK(r.residual < 1e-12 * r.scale);
}

TEST_CASE("virial: eigenvector expectation of the commutator vanishes") {
    FriedrichsModel fm = mourre_reference();
    MatrixModel star = discretize(fm, 400);
    CHECK(virial_residual(star, 0.0) <=
          1e-12 * std::max(1.0, commutator_i(star.H, star.A).norm()));

    MatrixModel rm = random_matrix_model(12, 31);
    CHECK(virial_residual(rm, 0.0) <=
          1e-10 * std::max(1.0, commutator_i(rm.H, rm.A).norm()));

    // negative control: a non-eigenvector direction gives a nonzero form value
    VectorXcd v = VectorXcd::Ones(rm.size()) / std::sqrt(double(rm.size()));
    const MatrixXcd M = kImag * (rm.H * rm.A - rm.A * rm.H);
    CHECK(std::abs((v.adjoint() * M * v)(0)) > 1e-6);
}

TEST_CASE("reduced commutator identity") {
    for (int j : {1, 2, 3}) {
        MatrixModel rm = random_matrix_model(8, 100 + j);
        CHECK(reduced_commutator_residual(rm, 0.3, j) < 1e-12);
    }
    FriedrichsModel fm = mourre_reference();
    MatrixModel star = discretize(fm, 300);
    CHECK(reduced_commutator_residual(star, 0.1, 2) < 1e-10);
}

TEST_CASE("mourre certificate: reduced positive, unreduced sees the eigenvector") {
    FriedrichsModel fm = mourre_reference();
    MatrixModel m = discretize(fm, 1200);
    const Interval delta{0.7, 1.3};

    CertificateOptions opts;
    MourreCertificate red0 = mourre_certificate(m, delta, true, 0.0, opts);
    CHECK(red0.theta > 0.0);
    CHECK(red0.exact_compression_min <= 1e-10);  // virial ceiling on the exact subspace

    opts.theta_target = 0.5 * red0.theta;
    MourreCertificate red = mourre_certificate(m, delta, true, 0.05, opts);
    CHECK(red.theta > 0.0);
    CHECK(red.deficiency_rank == 0);
    CHECK(std::abs(red.theta - red0.theta) <= 1.0 * 0.05 + 1e-12);  // kappa-stability

    MourreCertificate unred = mourre_certificate(m, delta, false, 0.05, opts);
    CHECK(unred.deficiency_rank >= 1);
    CHECK(unred.theta < opts.theta_target);

    CHECK_THROWS_AS(mourre_certificate(m, {40.0, 41.0}, true, 0.0, opts), Error);
}

TEST_CASE("mourre certificate is kappa-continuous on a random model") {
    // wide probes: a small dense spectrum needs sigma above its level spacing
    MatrixModel rm = random_matrix_model(32, 8);
    const Interval delta{rm.lambda - 3.0, rm.lambda + 3.0};
    CertificateOptions opts;
    opts.theta_target = 0.0;
    opts.sigma_fraction = 0.5;
    MourreCertificate c0 = mourre_certificate(rm, delta, true, 0.0, opts);
    MourreCertificate c1 = mourre_certificate(rm, delta, true, 0.05, opts);
    const double lip = 4.0 * rm.V.norm() * rm.A.norm() + 10.0;
    CHECK(std::abs(c1.theta - c0.theta) <= lip * 0.05);
}
