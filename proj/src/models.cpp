#include "specres/models.hpp"

#include <cmath>
#include <random>

namespace specres {

namespace {

// principal-branch sqrt(z-r)*sqrt(z+r): cut exactly on [-r,r], ~z at infinity
cxd branch_sqrt(cxd z, double r) {
    return std::sqrt(z - r) * std::sqrt(z + r);
}

}  // namespace

double CouplingDensity::operator()(double x) const {
    switch (kind) {
        case Kind::Lorentzian: {
            double d = x - x0;
            return (g * g / M_PI) * w / (d * d + w * w);
        }
        case Kind::Semicircle: {
            double d = x - center;
            if (std::abs(d) >= radius) return 0.0;
            return g * g * (2.0 / (M_PI * radius * radius)) *
                   std::sqrt(radius * radius - d * d);
        }
        case Kind::Polynomial: {
            if (x < poly_a || x > poly_b) return 0.0;
            double acc = 0.0;
            for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
                acc = acc * x + *it;
            return acc;
        }
    }
    return 0.0;
}

double CouplingDensity::total_mass() const {
    switch (kind) {
        case Kind::Lorentzian:
            return g * g;
        case Kind::Semicircle:
            return g * g;
        case Kind::Polynomial: {
            // exact antiderivative
            double acc = 0.0;
            for (std::size_t k = 0; k < coefficients.size(); ++k) {
                acc += coefficients[k] / double(k + 1) *
                       (std::pow(poly_b, double(k + 1)) - std::pow(poly_a, double(k + 1)));
            }
            return acc;
        }
    }
    return 0.0;
}

Interval CouplingDensity::compact_support() const {
    if (kind == Kind::Semicircle) return {center - radius, center + radius};
    if (kind == Kind::Polynomial) return {poly_a, poly_b};
    fail_config("compact_support: coupling has unbounded support");
}

cxd CouplingDensity::stieltjes_upper(cxd z) const {
    switch (kind) {
        case Kind::Lorentzian:
            return g * g / (z - x0 + cxd(0.0, w));
        case Kind::Semicircle: {
            cxd u = z - center;
            if (u.imag() == 0.0 && std::abs(u.real()) < radius)
                u += cxd(0.0, 1e-300);  // pin the boundary value from above
            return g * g * (2.0 / (radius * radius)) * (u - branch_sqrt(u, radius));
        }
        case Kind::Polynomial: {
            // \int p(x)/(z-x) dx = \int (p(x)-p(z))/(z-x) dx + p(z) log((z-a)/(z-b));
            // the first term is the polynomial q(z) integrated exactly.
            const auto& c = coefficients;
            const int d = int(c.size()) - 1;
            if (d < 0) return cxd(0.0);
            // q(x,z) = (p(x)-p(z))/(x-z) = sum_{k>=1} c_k sum_{j=0}^{k-1} x^j z^{k-1-j}
            // \int_a^b x^j dx = (b^{j+1}-a^{j+1})/(j+1)
            std::vector<double> xint(d + 1);
            for (int j = 0; j <= d; ++j)
                xint[j] = (std::pow(poly_b, j + 1) - std::pow(poly_a, j + 1)) / (j + 1);
            cxd qint = 0.0;
            for (int k = 1; k <= d; ++k) {
                cxd zp = 1.0;
                for (int j = k - 1; j >= 0; --j) {
                    qint += c[k] * xint[j] * zp;
                    zp *= z;
                }
            }
            cxd pz = 0.0;
            for (int k = d; k >= 0; --k) pz = pz * z + c[k];
            cxd za = z - poly_a, zb = z - poly_b;
            cxd logterm;
            if (z.imag() == 0.0 && z.real() > poly_a && z.real() < poly_b) {
                // boundary value from above: log(E-a) - log(b-E) - i pi
                logterm = std::log(za.real()) - std::log(-zb.real()) - cxd(0.0, M_PI);
            } else {
                logterm = std::log(za) - std::log(zb);
            }
            // note \int (p(x)-p(z))/(z-x) dx = -qint
            return -qint + pz * logterm;
        }
    }
    return cxd(0.0);
}

FriedrichsModel build_friedrichs(const FriedrichsSpec& spec) {
    const auto& c = spec.coupling;
    switch (c.kind) {
        case CouplingDensity::Kind::Lorentzian:
            if (c.w <= 0.0) fail_config("lorentzian coupling requires w > 0");
            break;
        case CouplingDensity::Kind::Semicircle:
            if (c.radius <= 0.0) fail_config("semicircle coupling requires radius > 0");
            break;
        case CouplingDensity::Kind::Polynomial: {
            if (!(c.poly_a < c.poly_b)) fail_config("polynomial coupling: empty support");
            // density must be nonnegative on the support
            for (int i = 0; i <= 400; ++i) {
                double x = c.poly_a + (c.poly_b - c.poly_a) * i / 400.0;
                if (c(x) < -1e-12 * std::max(1.0, std::abs(c(x))))
                    fail_config("polynomial coupling density is negative on its support");
            }
            break;
        }
    }
    if (!(c.total_mass() >= 0.0) || !std::isfinite(c.total_mass()))
        fail_config("coupling density is not integrable");

    FriedrichsModel m;
    m.lambda = spec.lambda;
    m.coupling = spec.coupling;
    m.unbounded_support = spec.unbounded_support;
    m.support = spec.support;
    m.truncation_L = spec.truncation_L;
    m.diag_shift = spec.diag_shift;

    if (c.compactly_supported()) {
        Interval s = c.compact_support();
        if (!m.unbounded_support) {
            // user-declared support must contain the coupling support
            if (m.support.lo > s.lo || m.support.hi < s.hi) m.support = s;
        } else {
            m.unbounded_support = false;
            m.support = s;
        }
    }
    Interval t = m.truncated_support();
    if (!t.strictly_contains(m.lambda))
        fail_config("eigenvalue not embedded: lambda outside the continuum support");
    return m;
}

double default_truncation(const CouplingDensity& coupling, double tol) {
    if (coupling.compactly_supported()) {
        Interval s = coupling.compact_support();
        return std::max(std::abs(s.lo), std::abs(s.hi));
    }
    // Lorentzian tail mass: (2/pi) * atan(w/L) * g^2  ->  L = w / tan(pi tol / 2)
    return coupling.w / std::tan(0.5 * M_PI * tol) + std::abs(coupling.x0);
}

MatrixModel discretize(const FriedrichsModel& model, int N) {
    if (N < 2) fail_config("discretize: N >= 2 required");
    Interval box = model.truncated_support();
    const double dx = box.width() / (N - 1);
    // grid must resolve the coupling feature scale
    double scale = box.width();
    switch (model.coupling.kind) {
        case CouplingDensity::Kind::Lorentzian: scale = model.coupling.w; break;
        case CouplingDensity::Kind::Semicircle: scale = model.coupling.radius; break;
        case CouplingDensity::Kind::Polynomial: scale = model.coupling.poly_b - model.coupling.poly_a; break;
    }
    if (dx > scale / 4.0)
        fail_config("discretize: N too small to resolve the coupling density");

    const int M = N + 1;
    MatrixXcd H = MatrixXcd::Zero(M, M);
    MatrixXcd V = MatrixXcd::Zero(M, M);
    MatrixXcd A = MatrixXcd::Zero(M, M);
    std::vector<double> xs(N);
    for (int i = 0; i < N; ++i) xs[i] = box.lo + dx * i;

    H(0, 0) = model.lambda;
    for (int i = 0; i < N; ++i) H(1 + i, 1 + i) = xs[i];
    V(0, 0) = model.diag_shift;
    for (int i = 0; i < N; ++i) {
        double vi = std::sqrt(dx * model.coupling(xs[i]));
        V(0, 1 + i) = vi;
        V(1 + i, 0) = vi;
    }
    // A = (i/2)(XD + DX), D antisymmetric central difference; entries are purely
    // imaginary so A is Hermitian; channel row/column stay zero.
    for (int i = 0; i + 1 < N; ++i) {
        double a = 0.5 * (xs[i] + xs[i + 1]) / (2.0 * dx);
        A(1 + i, 1 + i + 1) = cxd(0.0, a);
        A(1 + i + 1, 1 + i) = cxd(0.0, -a);
    }
    H = hermitize(H);
    V = hermitize(V);
    A = hermitize(A);

    MatrixModel m;
    m.H = std::move(H);
    m.V = std::move(V);
    m.A = std::move(A);
    m.phi = VectorXcd::Zero(M);
    m.phi(0) = 1.0;
    m.lambda = model.lambda;
    return m;
}

bool MatrixModel::is_real_star() const {
    return H.imag().norm() == 0.0 && V.imag().norm() == 0.0 && A.real().norm() == 0.0 &&
           phi.imag().norm() == 0.0;
}

Projections projections(const MatrixModel& model) {
    const double nrm = model.phi.norm();
    if (!(std::abs(nrm - 1.0) < 1e-10)) fail_config("projections: phi is not a unit vector");
    const double eig_resid = (model.H * model.phi - model.lambda * model.phi).norm();
    if (eig_resid > 1e-10 * model.H.norm())
        fail_config("projections: phi is not an eigenvector of H at the stated tolerance");
    Projections p;
    p.P = model.phi * model.phi.adjoint();
    p.P = hermitize(p.P);
    p.Pbar = MatrixXcd::Identity(model.size(), model.size()) - p.P;
    return p;
}

MatrixModel random_matrix_model(int size, std::uint64_t seed) {
    if (size < 2) fail_config("random_matrix_model: size >= 2 required");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_hermitian = [&]() {
        MatrixXcd G(size, size);
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j) G(i, j) = cxd(gauss(rng), gauss(rng));
        return hermitize(0.5 * (G + G.adjoint()));
    };
    MatrixModel m;
    m.H = random_hermitian();
    m.V = random_hermitian();
    m.A = random_hermitian();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m.H);
    const int pick = size / 2;  // interior eigenvalue
    m.lambda = es.eigenvalues()(pick);
    m.phi = es.eigenvectors().col(pick);
    m.phi /= m.phi.norm();
    return m;
}

double smoothed_coupling_density(const MatrixModel& model, double E, double eta) {
    double acc = 0.0;
    for (Eigen::Index i = 1; i < model.size(); ++i) {
        double v2 = std::norm(model.V(0, i));
        double d = E - model.H(i, i).real();
        acc += v2 * (eta / M_PI) / (d * d + eta * eta);
    }
    return acc;
}

}  // namespace specres
