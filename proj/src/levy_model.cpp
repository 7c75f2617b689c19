#include "canput/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "canput/errors.hpp"

namespace canput {

namespace {

// Newton on Psi(theta) = 0 starting from the closed-form root.
double polish_cancellation_root(const ModelParams& m, double theta) {
    for (int it = 0; it < 50; ++it) {
        const double f = laplace_exponent(m, theta);
        const double df = laplace_exponent_derivative(m, theta);
        if (df == 0.0 || !std::isfinite(df)) break;
        const double step = f / df;
        theta -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(theta))) break;
    }
    return theta;
}

}  // namespace

double ModelParams::sigma() const { return std::sqrt(sigma2_); }

ModelParams make_model(double r, double sigma2, double lambda, double rho) {
    auto bad = [](const char* what, double v) {
        std::ostringstream os;
        os << what << " (got " << v << ")";
        throw InvalidParams(os.str());
    };
    if (!(r > 0.0) || !std::isfinite(r)) bad("r must be positive and finite", r);
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) bad("sigma2 must be positive and finite", sigma2);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) bad("lambda must be non-negative and finite", lambda);
    if (lambda > 0.0 && (!(rho > 0.0) || !std::isfinite(rho)))
        bad("rho must be positive and finite when lambda > 0", rho);

    ModelParams m;
    m.r_ = r;
    m.sigma2_ = sigma2;
    m.lambda_ = lambda;
    m.rho_ = rho;

    if (lambda == 0.0) {
        m.mu_ = r - sigma2 / 2.0;
        // Nonzero root of mu theta + sigma^2 theta^2 / 2.
        m.alpha_ = 2.0 * m.mu_ / sigma2;
    } else {
        m.mu_ = r - sigma2 / 2.0 + lambda / (1.0 + rho);
        const double ms = m.mu_ / sigma2;
        const double closed =
            rho / 2.0 + ms - std::sqrt((rho / 2.0 - ms) * (rho / 2.0 - ms) + 2.0 * lambda / sigma2);
        m.alpha_ = -polish_cancellation_root(m, -closed);
    }

    if (!(m.alpha_ < 0.0)) {
        std::ostringstream os;
        os << "cancellation exponent alpha = " << m.alpha_
           << " >= 0; the last-passage time is a.s. infinite and the contract degenerates";
        throw DegenerateCancellation(os.str());
    }
    if (!(m.alpha_ > -1.0)) {
        std::ostringstream os;
        os << "cancellation exponent alpha = " << m.alpha_ << " outside (-1, 0)";
        throw DegenerateCancellation(os.str());
    }
    return m;
}

double laplace_exponent(const ModelParams& m, double theta) {
    double v = m.mu() * theta + 0.5 * m.sigma2() * theta * theta;
    if (m.has_jumps()) {
        if (theta <= -m.rho()) {
            std::ostringstream os;
            os << "Laplace exponent evaluated at theta = " << theta << " <= -rho = " << -m.rho();
            throw PoleError(os.str());
        }
        v -= m.lambda() * theta / (theta + m.rho());
    }
    return v;
}

double laplace_exponent_derivative(const ModelParams& m, double theta) {
    double v = m.mu() + m.sigma2() * theta;
    if (m.has_jumps()) {
        if (theta <= -m.rho()) {
            std::ostringstream os;
            os << "Laplace exponent derivative evaluated at theta = " << theta << " <= -rho";
            throw PoleError(os.str());
        }
        const double d = theta + m.rho();
        v -= m.lambda() * m.rho() / (d * d);
    }
    return v;
}

}  // namespace canput
