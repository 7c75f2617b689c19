#pragma once

#include <array>

#include "canput/levy_model.hpp"

namespace canput {

/**
 * Exponential-sum representation of the r-scale function
 *
 *   W(x) = sum_i c[i] exp(eta[i] x),   x >= 0.
 *
 * eta[0] = 1 is the right inverse Phi(r), forced by Psi(1) = r.
 * With jumps there are three terms: eta[1] in (-rho, 0) and eta[2] < -rho.
 * Without jumps the basis has two terms and slot 2 is zero.
 */
struct ScaleBasis {
    std::array<double, 3> eta{};
    std::array<double, 3> c{};
    int terms = 0;
    double phi_r = 1.0;
    /// Discriminant of the quadratic factor; zero for the two-term basis.
    double omega = 0.0;
};

/// Three-term basis for lambda > 0. Throws BranchError if lambda == 0 and
/// DegenerateRoots if two exponents coincide.
ScaleBasis build_scale_basis(const ModelParams& m);

/// Two-term Brownian basis. Throws BranchError if lambda > 0.
ScaleBasis build_scale_basis_bs(const ModelParams& m);

/// Dispatches on lambda.
ScaleBasis make_scale_basis(const ModelParams& m);

/// W^(r)(x); zero for x < 0.
double w_r(const ScaleBasis& b, double x);
/// W^(r)'(x); zero for x < 0.
double w_r_prime(const ScaleBasis& b, double x);
/// Z^(r)(x) = 1 + r int_0^x W; one for x < 0.
double z_r(const ScaleBasis& b, const ModelParams& m, double x);

/// The cubic (Psi(theta) - r)(theta + rho) whose roots are the eta's. For the
/// jump-free model this is just Psi(theta) - r.
double scale_root_polynomial(const ModelParams& m, double theta);

}  // namespace canput
