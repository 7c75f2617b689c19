#pragma once

namespace canput {

/**
 * Parameters of the log-price X_t = x + mu t + sigma B_t - sum U_k under the
 * martingale measure, with U_k ~ Exp(rho) arriving at Poisson rate lambda.
 *
 * Instances are only produced by make_model(), which enforces
 *   mu    = r - sigma2/2 + lambda/(1+rho)       (so that Psi(1) = r)
 *   alpha : Psi(-alpha) = 0,  -1 < alpha < 0     (cancellation exponent)
 * The type is immutable after construction.
 */
class ModelParams {
public:
    double r() const { return r_; }
    double sigma2() const { return sigma2_; }
    double sigma() const;
    double lambda() const { return lambda_; }
    /// Jump-size rate. Meaningless (and never read) when lambda() == 0.
    double rho() const { return rho_; }
    double mu() const { return mu_; }
    double alpha() const { return alpha_; }

    bool has_jumps() const { return lambda_ > 0.0; }

    friend ModelParams make_model(double r, double sigma2, double lambda, double rho);

private:
    ModelParams() = default;

    double r_ = 0.0;
    double sigma2_ = 0.0;
    double lambda_ = 0.0;
    double rho_ = 0.0;
    double mu_ = 0.0;
    double alpha_ = 0.0;
};

/// Validates parameters and derives mu and alpha.
/// Throws InvalidParams on out-of-range inputs and DegenerateCancellation when
/// alpha >= 0 (the survival process is identically one).
ModelParams make_model(double r, double sigma2, double lambda, double rho);

/// Psi(theta) = mu theta + sigma^2 theta^2 / 2 - lambda theta / (theta + rho).
/// Throws PoleError for theta <= -rho when the model has jumps.
double laplace_exponent(const ModelParams& m, double theta);

/// Psi'(theta).
double laplace_exponent_derivative(const ModelParams& m, double theta);

}  // namespace canput
