#include "specres/feshbach.hpp"

#include "specres/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace specres {

namespace {

// index of the coordinate direction when phi is exactly a coordinate vector
Eigen::Index coordinate_index(const VectorXcd& phi) {
    Eigen::Index k = -1;
    for (Eigen::Index i = 0; i < phi.size(); ++i) {
        if (phi(i) != cxd(0.0)) {
            if (k >= 0) return -1;
            k = i;
        }
    }
    if (k >= 0 && std::abs(std::abs(phi(k)) - 1.0) < 1e-15) return k;
    return -1;
}

MatrixXcd pbar_basis(const VectorXcd& phi) {
    // Householder QR of the single column phi: remaining Q columns span Ran P̄.
    Eigen::HouseholderQR<MatrixXcd> qr(phi);
    MatrixXcd Q = qr.householderQ();
    return Q.rightCols(phi.size() - 1);
}

}  // namespace

MatrixXcd reduce_to_pbar(const MatrixXcd& M, const VectorXcd& phi) {
    const Eigen::Index n = M.rows();
    const Eigen::Index k = coordinate_index(phi);
    if (k >= 0) {
        MatrixXcd out(n - 1, n - 1);
        out.topLeftCorner(k, k) = M.topLeftCorner(k, k);
        out.topRightCorner(k, n - 1 - k) = M.topRightCorner(k, n - 1 - k);
        out.bottomLeftCorner(n - 1 - k, k) = M.bottomLeftCorner(n - 1 - k, k);
        out.bottomRightCorner(n - 1 - k, n - 1 - k) = M.bottomRightCorner(n - 1 - k, n - 1 - k);
        return out;
    }
    const MatrixXcd Q = pbar_basis(phi);
    return Q.adjoint() * M * Q;
}

VectorXcd reduce_to_pbar(const VectorXcd& v, const VectorXcd& phi) {
    const Eigen::Index n = v.size();
    const Eigen::Index k = coordinate_index(phi);
    if (k >= 0) {
        VectorXcd out(n - 1);
        out.head(k) = v.head(k);
        out.tail(n - 1 - k) = v.tail(n - 1 - k);
        return out;
    }
    const MatrixXcd Q = pbar_basis(phi);
    return Q.adjoint() * v;
}

ReducedSpectral ReducedSpectral::build(const MatrixModel& model, double kappa) {
    const MatrixXcd Hred = reduce_to_pbar(model.H_kappa(kappa), model.phi);
    const VectorXcd u = reduce_to_pbar(VectorXcd(model.V * model.phi), model.phi);

    ReducedSpectral rs;
    const Eigen::Index n = Hred.rows();
    const double offdiag =
        (Hred - MatrixXcd(Hred.diagonal().asDiagonal())).norm();
    if (offdiag <= 1e-14 * std::max(1.0, Hred.norm())) {
        rs.evals = Hred.diagonal().real();
        rs.weights = u.cwiseAbs2();
    } else {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hermitize(Hred));
        rs.evals = es.eigenvalues();
        rs.weights = (es.eigenvectors().adjoint() * u).cwiseAbs2();
    }
    // sort by energy for spacing statistics
    std::vector<Eigen::Index> idx(n);
    for (Eigen::Index i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](Eigen::Index a, Eigen::Index b) { return rs.evals(a) < rs.evals(b); });
    VectorXd ev(n), wt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        ev(i) = rs.evals(idx[i]);
        wt(i) = rs.weights(idx[i]);
    }
    rs.evals = ev;
    rs.weights = wt;
    std::vector<double> gaps;
    gaps.reserve(n - 1);
    for (Eigen::Index i = 0; i + 1 < n; ++i) gaps.push_back(ev(i + 1) - ev(i));
    if (!gaps.empty()) {
        std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
        rs.level_spacing = gaps[gaps.size() / 2];
    }
    return rs;
}

cxd ReducedSpectral::self_energy(cxd z) const {
    cxd acc = 0.0;
    for (Eigen::Index j = 0; j < evals.size(); ++j) acc += weights(j) / (z - evals(j));
    return acc;
}

cxd self_energy(const MatrixModel& model, cxd z, double kappa) {
    if (z.imag() == 0.0) fail_config("self_energy: Im z != 0 required off the axis");
    const MatrixXcd Hred = reduce_to_pbar(model.H_kappa(kappa), model.phi);
    const VectorXcd u = reduce_to_pbar(VectorXcd(model.V * model.phi), model.phi);
    const Eigen::Index n = Hred.rows();
    const MatrixXcd Mz = z * MatrixXcd::Identity(n, n) - Hred;
    Eigen::PartialPivLU<MatrixXcd> lu(Mz);
    const VectorXcd y = lu.solve(u);
    const double resid = (Mz * y - u).norm();
    if (resid > 1e-8 * std::max(1.0, u.norm()))
        fail_contract("self_energy: singular resolvent solve off the real axis");
    return (u.adjoint() * y)(0);
}

cxd self_energy(const FriedrichsModel& model, cxd z, double /*kappa*/) {
    if (z.imag() < 0.0) fail_config("self_energy: Friedrichs evaluator covers Im z >= 0");
    return model.self_energy_upper(z);
}

cxd BoundaryTrace::derivative_at(double E, int k) const {
    if (k == 0) return interpolant(E);
    if (k < 1 || k > int(deriv_series.size()))
        fail_config("BoundaryTrace: derivative order out of range");
    return deriv_series[k - 1](E);
}

namespace {

void finalize_trace(BoundaryTrace& tr) {
    tr.deriv_series.clear();
    ChebyshevSeries d = tr.interpolant;
    for (int k = 1; k <= tr.n + 1; ++k) {
        d = d.derivative();
        tr.deriv_series.push_back(d);
    }
    const Eigen::Index M = tr.grid.size();
    tr.derivatives.assign(tr.n + 1, VectorXcd(M));
    for (int k = 1; k <= tr.n + 1; ++k)
        for (Eigen::Index j = 0; j < M; ++j)
            tr.derivatives[k - 1](j) = tr.deriv_series[k - 1](tr.grid(j));

    double c = 0.0;
    for (Eigen::Index j = 0; j < M; ++j) c = std::max(c, std::abs(tr.values(j)));
    for (const auto& dk : tr.derivatives)
        for (Eigen::Index j = 0; j < M; ++j) c = std::max(c, std::abs(dk(j)));
    tr.c_bound = c;

    for (Eigen::Index j = 0; j < M; ++j) {
        if (!(tr.values(j).imag() < 0.0))
            fail_contract("boundary trace: Im F(E+i0) not strictly negative on I "
                          "(eigenvalue not embedded, vanishing coupling, or I too large)");
    }
}

}  // namespace

BoundaryTrace boundary_trace(const FriedrichsModel& model, Interval I, double kappa, int n,
                             TraceMethod method, const TraceOptions& opts) {
    if (!(I.lo < I.hi)) fail_config("boundary_trace: empty interval");
    if (!I.strictly_contains(model.lambda))
        fail_config("boundary_trace: lambda must lie in the interior of I");
    if (method == TraceMethod::EtaExtrapolation)
        fail_config("boundary_trace: eta extrapolation applies to matrix models");
    Interval box = model.truncated_support();
    if (I.lo <= box.lo || I.hi >= box.hi)
        fail_config("boundary_trace: I must be interior to the continuum support");

    std::function<cxd(double)> value;
    if (method == TraceMethod::ClosedForm) {
        value = [&](double E) { return model.self_energy_upper(cxd(E, 0.0)); };
    } else {
        // Plemelj split: PV of the density minus i*pi*|v(E)|^2
        const auto& c = model.coupling;
        auto dens = [&c](double x) { return c(x); };
        if (c.compactly_supported()) {
            Interval s = c.compact_support();
            value = [&, s](double E) {
                double pv = pv_cauchy(dens, s.lo, s.hi, E);
                return cxd(pv, -M_PI * c(E));
            };
        } else {
            value = [&, dens](double E) {
                double pv = pv_cauchy_line(dens, E, c.w);
                return cxd(pv, -M_PI * c(E));
            };
        }
    }

    BoundaryTrace tr;
    tr.interval_I = I;
    tr.kappa = kappa;
    tr.n = n;
    tr.method = method;
    tr.lambda_ref = model.lambda;
    tr.interpolant = ChebyshevSeries::interpolate(value, I.lo, I.hi, opts.degree);
    tr.grid = VectorXd::LinSpaced(opts.grid_points, I.lo, I.hi);
    tr.values.resize(tr.grid.size());
    for (Eigen::Index j = 0; j < tr.grid.size(); ++j) tr.values(j) = value(tr.grid(j));
    finalize_trace(tr);
    return tr;
}

BoundaryTrace boundary_trace(const MatrixModel& model, Interval I, double kappa, int n,
                             const TraceOptions& opts) {
    if (!(I.lo < I.hi)) fail_config("boundary_trace: empty interval");
    if (!I.strictly_contains(model.lambda))
        fail_config("boundary_trace: lambda must lie in the interior of I");
    ReducedSpectral rs = ReducedSpectral::build(model, kappa);
    if (rs.level_spacing <= 0.0)
        fail_convergence("boundary_trace: degenerate reduced spectrum");

    std::vector<double> etas;
    double eta = opts.eta0_spacing_factor * rs.level_spacing;
    for (int r = 0; r <= opts.eta_halvings; ++r) {
        if (eta < opts.eta_floor_factor * rs.level_spacing) break;
        etas.push_back(eta);
        eta *= 0.5;
    }
    if (etas.size() < 3)
        fail_convergence(
            "boundary_trace: eta ladder reaches the level spacing -- discretization "
            "under-resolved for the requested interval");

    BoundaryTrace tr;
    tr.interval_I = I;
    tr.kappa = kappa;
    tr.n = n;
    tr.method = TraceMethod::EtaExtrapolation;
    tr.lambda_ref = model.lambda;
    tr.grid = VectorXd::LinSpaced(opts.matrix_grid_points, I.lo, I.hi);
    tr.values.resize(tr.grid.size());
    double worst = 0.0;
    std::vector<double> xs(tr.grid.size());
    std::vector<cxd> ys(tr.grid.size());
    for (Eigen::Index j = 0; j < tr.grid.size(); ++j) {
        std::vector<cxd> ladder(etas.size());
        for (std::size_t r = 0; r < etas.size(); ++r)
            ladder[r] = rs.self_energy(cxd(tr.grid(j), etas[r]));
        double est = 0.0;
        tr.values(j) = neville_to_zero(etas, ladder, &est);
        worst = std::max(worst, est);
        xs[j] = tr.grid(j);
        ys[j] = tr.values(j);
    }
    tr.eta_error = worst;
    // noisy samples: smoothing fit rather than full-degree interpolation
    tr.interpolant = ChebyshevSeries::fit(xs, ys, I.lo, I.hi, opts.matrix_fit_degree);
    finalize_trace(tr);
    return tr;
}

ReducedFunction make_reduced(const BoundaryTrace& trace, double lambda, double phi_V_phi) {
    ReducedFunction r;
    r.kappa = trace.kappa;
    r.lambda1 = lambda + trace.kappa * phi_V_phi;
    r.F_on_axis = trace.interpolant;
    return r;
}

double golden_rule_width(const BoundaryTrace& trace_at_zero, double lambda) {
    if (trace_at_zero.kappa != 0.0)
        fail_config("golden_rule_width: requires the kappa = 0 trace");
    if (!trace_at_zero.interval_I.contains(lambda))
        fail_config("golden_rule_width: lambda outside the trace interval");
    const double gamma = -2.0 * trace_at_zero.value_at(lambda).imag();
    if (!(gamma > 0.0))
        fail_contract("golden_rule_width: Gamma not positive -- Golden-Rule "
                      "positivity fails for this model");
    return gamma;
}

double feshbach_identity_residual(const MatrixModel& model, cxd z, double kappa) {
    if (z.imag() == 0.0) fail_config("feshbach_identity_residual: Im z != 0 required");
    const Eigen::Index n = model.size();
    const MatrixXcd Mz = z * MatrixXcd::Identity(n, n) - model.H_kappa(kappa);
    const VectorXcd y = Eigen::PartialPivLU<MatrixXcd>(Mz).solve(model.phi);
    const cxd matel = (model.phi.adjoint() * y)(0);
    const cxd lhs = 1.0 / matel;
    const cxd B = model.lambda + kappa * model.phi_V_phi() +
                  kappa * kappa * self_energy(model, z, kappa);
    return std::abs(lhs - (z - B));
}

}  // namespace specres
