#pragma once

#include <string>
#include <vector>

#include "canput/levy_model.hpp"
#include "canput/mc.hpp"
#include "canput/pricer.hpp"
#include "canput/scale_functions.hpp"

namespace canput::validation {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Psi(theta) - r evaluated through the root polynomial, so it is also
/// defined below the pole at -rho.
double root_residual(const ModelParams& m, double theta);

/// int_0^upper e^{-beta x} W(x) dx by adaptive Gauss-Kronrod.
double truncated_laplace_transform(const ScaleBasis& b, double beta, double upper);

/// Bound on int_upper^inf e^{-beta x} |W(x)| dx from the exponential sum.
double laplace_truncation_bound(const ScaleBasis& b, double beta, double upper);

/// |V'_{a*}(a*+) - G'(a*)| with a Richardson-extrapolated one-sided derivative.
double smooth_fit_mismatch(const ScaleBasis& b, const ModelParams& m, const Contract& c, double a_star);

/// d/da V_a(s) at a by central differences.
double threshold_sensitivity(const ScaleBasis& b, const ModelParams& m, const Contract& c, double s, double a);

std::vector<Check> analytic_suite(const ModelParams& m, const Contract& c);

struct McSuiteConfig {
    mc::McConfig survival;
    /// Configuration of the direct last-passage run (simulates to the horizon
    /// for every path that is not rescued, so it is normally coarser).
    mc::McConfig direct;
    /// Paths used for the bridge-on/off ordering check.
    std::size_t ordering_paths = 2000;
};

std::vector<Check> mc_suite(const ModelParams& m, const Contract& c, const McSuiteConfig& cfg);

}  // namespace canput::validation
