#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace specres {

using cxd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr cxd kImag{0.0, 1.0};

/// Failure classes, mapped to CLI exit codes (see tools/).
enum class ErrorKind {
    Config,         // bad input / precondition on user-provided data
    Contract,       // a declared numerical contract was violated
    Convergence,    // an iteration or extrapolation failed to converge
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_config(const std::string& msg) { throw Error(ErrorKind::Config, msg); }
[[noreturn]] inline void fail_contract(const std::string& msg) { throw Error(ErrorKind::Contract, msg); }
[[noreturn]] inline void fail_convergence(const std::string& msg) { throw Error(ErrorKind::Convergence, msg); }

/// Closed real interval.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool strictly_contains(double x) const { return x > lo && x < hi; }
};

/// Exact Hermitian symmetrization: (M + M^*)/2 entrywise, which is exactly
/// Hermitian in floating point (commutative additions, imaginary diagonal zeroed).
inline MatrixXcd hermitize(const MatrixXcd& m) {
    MatrixXcd out = 0.5 * (m + m.adjoint().eval());
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, i) = cxd(out(i, i).real(), 0.0);
    return out;
}

inline double hermiticity_residual(const MatrixXcd& m) {
    return (m - m.adjoint()).norm();
}

}  // namespace specres
