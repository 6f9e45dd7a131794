#include "specres/mourre.hpp"

#include "specres/quadrature.hpp"

#include <cmath>

namespace specres {

namespace {

MatrixXcd comm(const MatrixXcd& X, const MatrixXcd& Y) { return X * Y - Y * X; }

// plain iterated commutator ad^{(k)}_Y(X) = [...[X,Y],...,Y]
MatrixXcd ad_k(const MatrixXcd& X, const MatrixXcd& Y, int k) {
    MatrixXcd out = X;
    for (int i = 0; i < k; ++i) out = comm(out, Y);
    return out;
}

MatrixXcd matpow(const MatrixXcd& X, int k) {
    MatrixXcd out = MatrixXcd::Identity(X.rows(), X.cols());
    for (int i = 0; i < k; ++i) out = out * X;
    return out;
}

double binom(int n, int k) {
    double c = 1.0;
    for (int j = 0; j < k; ++j) c = c * double(n - j) / double(j + 1);
    return c;
}

}  // namespace

CommutatorLedger build_ledger(const MatrixModel& model, int nu) {
    CommutatorLedger led;
    led.H = model.H;
    led.V = model.V;
    led.A = model.A;
    led.nu = nu;
    led.ads_H.reserve(nu + 1);
    led.ads_V.reserve(nu + 1);
    led.ads_H.push_back(model.H);
    led.ads_V.push_back(model.V);
    for (int k = 1; k <= nu; ++k) {
        led.ads_H.push_back(commutator_i(led.ads_H.back(), model.A));
        led.ads_V.push_back(commutator_i(led.ads_V.back(), model.A));
    }
    const Eigen::Index n = model.size();
    const MatrixXcd HH = model.H * model.H + MatrixXcd::Identity(n, n);
    auto bounds = [&](const std::vector<MatrixXcd>& ads, std::vector<double>& a,
                      std::vector<double>& b) {
        a.assign(nu + 1, 0.0);
        b.assign(nu + 1, 0.0);
        for (int k = 0; k <= nu; ++k) {
            const MatrixXcd T2 = ads[k].adjoint() * ads[k];
            Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXcd> ges(hermitize(T2),
                                                                    hermitize(HH));
            const double mu = ges.eigenvalues().maxCoeff();
            a[k] = b[k] = std::sqrt(std::max(0.0, mu));
        }
    };
    bounds(led.ads_H, led.a_H, led.b_H);
    bounds(led.ads_V, led.a_V, led.b_V);
    return led;
}

MatrixXcd commutator_i(const MatrixXcd& X, const MatrixXcd& Y) {
    const Eigen::Index n = X.rows();
    const double offdiag = (X - MatrixXcd(X.diagonal().asDiagonal())).norm();
    if (offdiag <= 1e-14 * std::max(1.0, X.norm())) {
        MatrixXcd M(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k)
                M(j, k) = kImag * (X(j, j) - X(k, k)) * Y(j, k);
        return hermitize(M);
    }
    if (X.imag().norm() == 0.0 && Y.real().norm() == 0.0) {
        // Y = iB with B real antisymmetric: i[X,Y] = -(X B - B X)
        const MatrixXd Xr = X.real();
        const MatrixXd B = Y.imag();
        MatrixXd M = -(Xr * B - B * Xr);
        return hermitize(M.cast<cxd>());
    }
    return hermitize(kImag * (X * Y - Y * X));
}

MatrixXcd arctan_regularized(const MatrixXcd& A, double eps) {
    if (eps == 0.0) fail_config("arctan_regularized: eps != 0 required");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(A);
    VectorXd f = es.eigenvalues();
    for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = std::atan(eps * f(i)) / eps;
    return hermitize(es.eigenvectors() * f.asDiagonal() * es.eigenvectors().adjoint());
}

MatrixXcd arctan_regularized_integral(const MatrixXcd& A, double eps, int order) {
    // t = 1/u maps the resolvent representation to
    //   A_eps = \int_0^1 A (1 + u^2 eps^2 A^2)^{-1} du,
    // analytic on [0,1]; no truncation of the original infinite range.
    if (eps == 0.0) fail_config("arctan_regularized_integral: eps != 0 required");
    const Eigen::Index n = A.rows();
    const MatrixXcd A2 = eps * eps * (A * A);
    const auto& rule = GaussLegendre::get(order);
    MatrixXcd acc = MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = 0.5 + 0.5 * rule.nodes[i];
        const MatrixXcd M = MatrixXcd::Identity(n, n) + u * u * A2;
        acc += (0.5 * rule.weights[i]) * M.partialPivLu().solve(A);
    }
    return hermitize(acc);
}

std::vector<IdentityResidual> commutator_identities_check(const CommutatorLedger& ledger,
                                                          double eps, int n) {
    if (ledger.nu < n + 2)
        fail_config("commutator_identities_check: ledger order nu >= n+2 required");
    const MatrixXcd& H = ledger.H;
    const MatrixXcd& A = ledger.A;
    const Eigen::Index N = H.rows();
    const MatrixXcd Id = MatrixXcd::Identity(N, N);

    // plain-convention ads of H with respect to A, from the Hermitian ledger
    auto ad_plain = [&](int k) -> MatrixXcd {
        cxd mik = 1.0;
        for (int i = 0; i < k; ++i) mik *= cxd(0.0, -1.0);
        return mik * ledger.ads_H[k];
    };

    std::vector<IdentityResidual> out;
    auto push = [&](const std::string& name, const MatrixXcd& lhs, const MatrixXcd& rhs,
                    double tol) {
        IdentityResidual r;
        r.name = name;
        r.residual = (lhs - rhs).norm();
        r.scale = std::max(1e-300, lhs.norm() + rhs.norm());
        r.tol = tol;
        out.push_back(r);
    };

    const MatrixXcd B1 = ad_plain(1);
    const MatrixXcd B3 = ad_plain(3);

    {  // resolvent commutator expansions at an off-axis sample point
        const cxd z(0.7, 1.3);
        const MatrixXcd R = (A - z * Id).partialPivLu().solve(Id).eval();
        push("resolvent-expansion-1", comm(H, R), (-R * B1 * R).eval(), 1e-10);
        const MatrixXcd rhs = -0.5 * (R * R * B1 + B1 * R * R) + 0.5 * (R * R * B3 * R * R);
        push("resolvent-expansion-2", comm(H, R), rhs, 1e-10);
    }

    const MatrixXcd Aeps = arctan_regularized(A, eps);
    push("arctan-two-route", Aeps, arctan_regularized_integral(A, eps), 1e-6);

    {  // first convergence form of [H, A_eps]
        const auto& rule = GaussLegendre::get(128);
        MatrixXcd acc = MatrixXcd::Zero(N, N);
        for (int sigma : {+1, -1}) {
            const cxd si(0.0, double(sigma));
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double u = 0.5 + 0.5 * rule.nodes[i];
                const MatrixXcd Ri = (u * eps * A + si * Id).partialPivLu().solve(Id).eval();
                acc += (0.5 * rule.weights[i]) * (Ri * B1 * Ri);
            }
        }
        push("commutator-resolvent-form", comm(H, Aeps), (-0.5 * acc).eval(), 1e-6);
    }

    {  // second convergence form with the third-order correction terms
        MatrixXcd rhs = MatrixXcd::Zero(N, N);
        for (int sigma : {+1, -1}) {
            const cxd is(0.0, double(sigma));
            const MatrixXcd L = (Id - is * eps * A).partialPivLu().solve(Id).eval();
            const MatrixXcd Rr = (Id + is * eps * A).partialPivLu().solve(Id).eval();
            rhs += 0.5 * (L * B1 * Rr);
        }
        const MatrixXcd S = (Id + eps * eps * (A * A)).partialPivLu().solve(Id).eval();
        rhs += 0.5 * eps * eps * (S * B3 * S);
        const auto& rule = GaussLegendre::get(128);
        MatrixXcd acc = MatrixXcd::Zero(N, N);
        for (int sigma : {+1, -1}) {
            const cxd si(0.0, double(sigma));
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double u = 0.5 + 0.5 * rule.nodes[i];
                const MatrixXcd Ri = (u * eps * A + si * Id).partialPivLu().solve(Id).eval();
                acc += (0.5 * rule.weights[i]) * (u * u * (Ri * Ri * B3 * Ri * Ri));
            }
        }
        rhs += 0.25 * eps * eps * acc;
        push("commutator-bounded-form", comm(H, Aeps), rhs, 1e-6);
    }

    {  // binomial expansion, its adjoint, and the odd-power identity (ads wrt A_eps)
        std::vector<MatrixXcd> adEps(n + 3);
        adEps[0] = H;
        for (int k = 1; k <= n + 2; ++k) adEps[k] = comm(adEps[k - 1], Aeps);

        MatrixXcd rhs9 = MatrixXcd::Zero(N, N);
        for (int k = 0; k <= n; ++k) rhs9 += binom(n, k) * (matpow(Aeps, n - k) * adEps[k]);
        push("binomial-expansion", (H * matpow(Aeps, n)).eval(), rhs9, 1e-10);

        MatrixXcd rhs10 = H * matpow(Aeps, n);
        for (int k = 1; k <= n; ++k) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            rhs10 += binom(n, k) * sign * (adEps[k] * matpow(Aeps, n - k));
        }
        push("adjoint-expansion", (matpow(Aeps, n) * H).eval(), rhs10, 1e-10);

        const MatrixXcd An = matpow(Aeps, n);
        MatrixXcd rhs11 = double(2 * n + 1) * (An * comm(H, Aeps) * An);
        for (int k = 2; k <= n + 1; ++k) {
            const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^{k-1}
            rhs11 += binom(n + 1, k) * (matpow(Aeps, n + 1 - k) * adEps[k] * An +
                                        sign * (An * adEps[k] * matpow(Aeps, n + 1 - k)));
        }
        push("odd-power-identity", comm(H, matpow(Aeps, 2 * n + 1)), rhs11, 1e-10);
    }
    return out;
}

double virial_residual(const MatrixModel& model, double kappa) {
    VectorXcd psi;
    if (kappa == 0.0) {
        psi = model.phi;
    } else {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(model.H_kappa(kappa));
        Eigen::Index best = 0;
        double bd = std::numeric_limits<double>::max();
        for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
            double d = std::abs(es.eigenvalues()(j) - model.lambda);
            if (d < bd) {
                bd = d;
                best = j;
            }
        }
        psi = es.eigenvectors().col(best);
    }
    const MatrixXcd M = commutator_i(model.H_kappa(kappa), model.A);
    return std::abs((psi.adjoint() * M * psi)(0));
}

namespace {

struct ReducedPair {
    MatrixXcd Hop, Aop;
    VectorXcd chi;         // smooth reference vector in the operator basis
    VectorXcd channel;     // phi direction (unreduced only; empty otherwise)
};

ReducedPair reduce_for_certificate(const MatrixModel& model, bool reduced, double kappa) {
    ReducedPair rp;
    const Eigen::Index N = model.size();
    if (!reduced) {
        rp.Hop = model.H_kappa(kappa);
        rp.Aop = model.A;
        rp.chi = VectorXcd::Ones(N) / std::sqrt(double(N));
        rp.channel = model.phi;
        return rp;
    }
    rp.Hop = hermitize(reduce_to_pbar(model.H_kappa(kappa), model.phi));
    rp.Aop = hermitize(reduce_to_pbar(model.A, model.phi));
    rp.chi = reduce_to_pbar(VectorXcd(VectorXcd::Ones(N)), model.phi);
    const double nrm = rp.chi.norm();
    if (nrm < 1e-12) fail_config("mourre_certificate: degenerate reference vector");
    rp.chi /= nrm;
    return rp;
}

struct SpectralDecomp {
    VectorXd ev;
    MatrixXcd U;
};

SpectralDecomp decompose(const MatrixXcd& H) {
    SpectralDecomp sd;
    const Eigen::Index n = H.rows();
    const double offdiag = (H - MatrixXcd(H.diagonal().asDiagonal())).norm();
    if (offdiag <= 1e-14 * std::max(1.0, H.norm())) {
        std::vector<Eigen::Index> idx(n);
        for (Eigen::Index i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
            return H(a, a).real() < H(b, b).real();
        });
        sd.ev.resize(n);
        sd.U = MatrixXcd::Zero(n, n);
        for (Eigen::Index c = 0; c < n; ++c) {
            sd.ev(c) = H(idx[c], idx[c]).real();
            sd.U(idx[c], c) = 1.0;
        }
        return sd;
    }
    if (H.imag().norm() == 0.0) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(H.real());
        sd.ev = es.eigenvalues();
        sd.U = es.eigenvectors().cast<cxd>();
        return sd;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H);
    sd.ev = es.eigenvalues();
    sd.U = es.eigenvectors();
    return sd;
}

}  // namespace

MourreCertificate mourre_certificate(const MatrixModel& model, Interval delta, bool reduced,
                                     double kappa, const CertificateOptions& opts) {
    ReducedPair rp = reduce_for_certificate(model, reduced, kappa);
    const Eigen::Index N = rp.Hop.rows();
    SpectralDecomp es = decompose(rp.Hop);
    const VectorXd& ev = es.ev;
    const MatrixXcd& U = es.U;

    std::vector<Eigen::Index> in_delta;
    for (Eigen::Index j = 0; j < N; ++j)
        if (delta.contains(ev(j))) in_delta.push_back(j);
    if (in_delta.empty())
        fail_config("mourre_certificate: empty spectral subspace for Delta");

    const MatrixXcd M = commutator_i(rp.Hop, rp.Aop);

    MourreCertificate cert;
    cert.delta = delta;
    cert.kappa = kappa;
    cert.reduced = reduced;

    {  // exact spectral compression (diagnostic; min eigenvalue <= 0 by the virial theorem)
        MatrixXcd W(N, Eigen::Index(in_delta.size()));
        for (std::size_t c = 0; c < in_delta.size(); ++c) W.col(c) = U.col(in_delta[c]);
        const MatrixXcd C = hermitize(W.adjoint() * M * W);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> ce(C);
        cert.exact_compression_min = ce.eigenvalues().minCoeff();
    }

    // probe compression: smooth energy packets f_sigma(H - mu_m) chi
    const double sigma = opts.sigma_fraction * delta.width();
    cert.sigma = sigma;
    {
        // packets must be resolvable: median level gap inside Delta below sigma/4
        std::vector<double> gaps;
        for (std::size_t c = 0; c + 1 < in_delta.size(); ++c)
            gaps.push_back(ev(in_delta[c + 1]) - ev(in_delta[c]));
        if (!gaps.empty()) {
            std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
            if (gaps[gaps.size() / 2] > 0.25 * sigma)
                fail_convergence(
                    "mourre_certificate: level spacing in Delta exceeds the probe "
                    "resolution sigma/4 -- refine the discretization");
        }
    }
    std::vector<VectorXcd> probes;
    auto add_probe = [&](double mu, const VectorXcd& src) {
        VectorXd f(N);
        for (Eigen::Index j = 0; j < N; ++j) {
            double d = (ev(j) - mu) / sigma;
            f(j) = std::exp(-0.5 * d * d);
        }
        VectorXcd u = U * (f.asDiagonal() * (U.adjoint() * src).eval());
        const double nrm = u.norm();
        if (nrm > 1e-12) probes.push_back(u / nrm);
    };
    double lo = delta.lo + 2.0 * sigma, hi = delta.hi - 2.0 * sigma;
    if (!(lo < hi)) lo = hi = delta.mid();
    const int m = std::max(2, opts.probes);
    for (int i = 0; i < m; ++i) add_probe(lo + (hi - lo) * i / (m - 1), rp.chi);
    // the eigenvector direction belongs to Ran E_Delta only when lambda is in Delta
    if (!reduced && opts.include_channel_probe && delta.contains(model.lambda) &&
        rp.channel.size() == N)
        add_probe(model.lambda, rp.channel);

    MatrixXcd B(N, Eigen::Index(probes.size()));
    for (std::size_t c = 0; c < probes.size(); ++c) B.col(c) = probes[c];
    Eigen::ColPivHouseholderQR<MatrixXcd> qr(B);
    const Eigen::Index rank =
        std::min<Eigen::Index>(B.cols(), qr.rank());
    MatrixXcd Up = MatrixXcd(qr.householderQ()).leftCols(rank);
    const MatrixXcd C = hermitize(Up.adjoint() * M * Up);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> ce(C);
    cert.probe_count = int(rank);
    cert.probe_eigenvalues.assign(ce.eigenvalues().data(),
                                  ce.eigenvalues().data() + ce.eigenvalues().size());
    cert.theta = ce.eigenvalues().minCoeff();

    double target = opts.theta_target;
    if (target < 0.0) {
        if (reduced && kappa == 0.0) {
            target = 0.5 * cert.theta;
        } else {
            CertificateOptions ref = opts;
            ref.theta_target = 0.0;
            target = 0.5 * mourre_certificate(model, delta, true, 0.0, ref).theta;
        }
    }
    cert.theta_target = target;
    cert.deficiency_rank = 0;
    for (double e : cert.probe_eigenvalues)
        if (e < target) ++cert.deficiency_rank;
    return cert;
}

double reduced_commutator_residual(const MatrixModel& model, double kappa, int j) {
    const Eigen::Index N = model.size();
    const MatrixXcd Id = MatrixXcd::Identity(N, N);
    const MatrixXcd P = model.phi * model.phi.adjoint();
    const MatrixXcd Pbar = Id - P;
    const MatrixXcd Hk = model.H_kappa(kappa);
    const MatrixXcd Hhat = Pbar * Hk * Pbar;
    const MatrixXcd Ahat = Pbar * model.A * Pbar;

    const MatrixXcd lhs = ad_k(Hhat, Ahat, j);

    // G_{j+1} = Pbar (A P ad^j - ad^j P A) Pbar + [G_j, Ahat]
    MatrixXcd G = MatrixXcd::Zero(N, N);
    MatrixXcd adj = Hk;
    for (int s = 0; s < j; ++s) {
        G = Pbar * (model.A * P * adj - adj * P * model.A) * Pbar + comm(G, Ahat);
        adj = comm(adj, model.A);
    }
    const MatrixXcd rhs = Pbar * adj * Pbar + G;
    const double scale = std::max(1e-300, lhs.norm() + rhs.norm());
    return (lhs - rhs).norm() / scale;
}

}  // namespace specres
