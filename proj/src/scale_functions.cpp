#include "canput/scale_functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "canput/errors.hpp"

namespace canput {

namespace {

constexpr double kRootSeparation = 1e-10;

double cubic_derivative(const ModelParams& m, double t) {
    const double s2 = m.sigma2();
    const double rho = m.rho();
    return 1.5 * s2 * t * t + 2.0 * (m.mu() + 0.5 * s2 * rho) * t + (m.mu() * rho - m.lambda() - m.r());
}

double polish_root(const ModelParams& m, double t) {
    for (int it = 0; it < 50; ++it) {
        const double f = scale_root_polynomial(m, t);
        const double df = cubic_derivative(m, t);
        if (df == 0.0 || !std::isfinite(df)) break;
        const double step = f / df;
        t -= step;
        if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(t))) break;
    }
    return t;
}

}  // namespace

double scale_root_polynomial(const ModelParams& m, double t) {
    if (!m.has_jumps()) return m.mu() * t + 0.5 * m.sigma2() * t * t - m.r();
    const double s2 = m.sigma2();
    const double rho = m.rho();
    return ((0.5 * s2 * t + (m.mu() + 0.5 * s2 * rho)) * t + (m.mu() * rho - m.lambda() - m.r())) * t -
           m.r() * rho;
}

ScaleBasis build_scale_basis(const ModelParams& m) {
    if (!m.has_jumps()) throw BranchError("three-term scale basis requires lambda > 0");

    const double r = m.r();
    const double s2 = m.sigma2();
    const double lam = m.lambda();
    const double rho = m.rho();

    // (Psi(t) - r)(t + rho) = (t - 1)(s2/2 t^2 + b t + r rho), with
    // (1 + rho) b = lam + (1 + rho)(r + s2 rho / 2).
    const double b1 = lam + (1.0 + rho) * (r + 0.5 * s2 * rho);
    const double dev = r - 0.5 * rho * s2;
    const double omega = lam * lam + lam * (rho + 1.0) * (2.0 * r + rho * s2) + (rho + 1.0) * (rho + 1.0) * dev * dev;
    const double denom = (1.0 + rho) * s2;

    // Larger-magnitude root directly, the other via the product 2 r rho / s2.
    double far = -(b1 + std::sqrt(omega)) / denom;
    double near = (2.0 * r * rho / s2) / far;
    far = polish_root(m, far);
    near = polish_root(m, near);

    ScaleBasis basis;
    basis.terms = 3;
    basis.omega = omega;
    basis.phi_r = 1.0;
    basis.eta = {1.0, near, far};

    const auto& e = basis.eta;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (std::abs(e[i] - e[j]) < kRootSeparation) {
                std::ostringstream os;
                os << "scale exponents eta" << i + 1 << " = " << e[i] << " and eta" << j + 1 << " = " << e[j]
                   << " coincide";
                throw DegenerateRoots(os.str());
            }
        }
    }
    for (int i = 0; i < 3; ++i) {
        double prod = 1.0;
        for (int j = 0; j < 3; ++j)
            if (j != i) prod *= (e[i] - e[j]);
        basis.c[i] = 2.0 * (e[i] + rho) / (s2 * prod);
    }
    return basis;
}

ScaleBasis build_scale_basis_bs(const ModelParams& m) {
    if (m.has_jumps()) throw BranchError("two-term scale basis requires lambda == 0");
    ScaleBasis basis;
    basis.terms = 2;
    basis.phi_r = 1.0;
    // Roots of s2/2 t^2 + mu t - r with mu = r - s2/2 are 1 and -2r/s2.
    basis.eta = {1.0, -2.0 * m.r() / m.sigma2(), 0.0};
    const double c1 = 1.0 / (0.5 * m.sigma2() * (basis.eta[0] - basis.eta[1]));
    basis.c = {c1, -c1, 0.0};
    return basis;
}

ScaleBasis make_scale_basis(const ModelParams& m) {
    return m.has_jumps() ? build_scale_basis(m) : build_scale_basis_bs(m);
}

// The leading term exp(eta[0] x) = exp(x) is factored out; the remaining
// exponents are negative so their terms decay instead of overflowing.
double w_r(const ScaleBasis& b, double x) {
    if (x < 0.0) return 0.0;
    double acc = b.c[0];
    for (int i = 1; i < b.terms; ++i) acc += b.c[i] * std::exp((b.eta[i] - b.eta[0]) * x);
    return std::exp(b.eta[0] * x) * acc;
}

double w_r_prime(const ScaleBasis& b, double x) {
    if (x < 0.0) return 0.0;
    double acc = b.c[0] * b.eta[0];
    for (int i = 1; i < b.terms; ++i) acc += b.c[i] * b.eta[i] * std::exp((b.eta[i] - b.eta[0]) * x);
    return std::exp(b.eta[0] * x) * acc;
}

double z_r(const ScaleBasis& b, const ModelParams& m, double x) {
    if (x < 0.0) return 1.0;
    double acc = 0.0;
    for (int i = 0; i < b.terms; ++i) acc += b.c[i] * std::expm1(b.eta[i] * x) / b.eta[i];
    return 1.0 + m.r() * acc;
}

}  // namespace canput
