#pragma once

#include <functional>
#include <string>
#include <vector>

#include "canput/levy_model.hpp"
#include "canput/scale_functions.hpp"

namespace canput {

/// Perpetual put with strike K that is cancelled at the last passage of the
/// underlying above the barrier h (h > K).
struct Contract {
    double strike = 0.0;
    double barrier = 0.0;
    double spot = 0.0;
};

/// Validates h > K > 0 and spot > 0; throws InvalidParams otherwise.
Contract make_contract(double strike, double barrier, double spot);

enum class Region { Continuation, Exercise };

const char* to_string(Region region);

struct PriceReport {
    double a_star = 0.0;
    double value = 0.0;
    double creeping_factor = 0.0;
    double undershoot_factor = 0.0;
    double g_at_a = 0.0;
    double g_integral = 0.0;
    Region region = Region::Continuation;
    std::vector<std::string> warnings;
};

/// Collects non-fatal numerical notes (e.g. clamped passage factors).
using Warnings = std::vector<std::string>;

// --- payoff -----------------------------------------------------------------

/// G(s) = (K - s)^+ min((h/s)^alpha, 1): the put payoff weighted by the
/// probability that the last passage above h is still ahead.
double g_payoff(const ModelParams& m, const Contract& c, double s);

/// G'(s) for 0 < s < K.
double g_payoff_derivative(const ModelParams& m, const Contract& c, double s);

/// int_0^inf rho e^{-rho y} G(a e^{-y}) dy in closed form; zero without jumps.
/// Throws DomainError unless 0 < a < K.
double g_integral(const ModelParams& m, const Contract& c, double a);

// --- first passage below a ----------------------------------------------------

/// E_s[e^{-r tau_a}; S_{tau_a} = a]. Requires s >= a > 0.
double creeping_factor(const ScaleBasis& b, const ModelParams& m, double s, double a, Warnings* warnings = nullptr);

/// E_s[e^{-r tau_a}; S_{tau_a} < a]. Requires s >= a > 0.
double undershoot_factor(const ScaleBasis& b, const ModelParams& m, double s, double a,
                         Warnings* warnings = nullptr);

/// Value of the policy "exercise at the first passage below a". For s < a the
/// policy stops immediately and the value is G(s).
/// Throws DomainError unless 0 < a < K.
double value_at_threshold(const ScaleBasis& b, const ModelParams& m, const Contract& c, double s, double a);

// --- optimal threshold ----------------------------------------------------------

/// Closed-form optimal exercise level. Throws ThresholdOutOfRange if the result
/// leaves (0, K).
double optimal_threshold(const ScaleBasis& b, const ModelParams& m, const Contract& c);

/// Sign conditions that certify 0 < a* < K for the jump model. All flags hold
/// trivially (and `applicable` is false) without jumps.
struct ThresholdDiagnostics {
    bool applicable = false;
    double c2 = 0.0;
    double c3 = 0.0;
    /// sum_{i=2,3} C_i [r(1/eta_i - 1) - sigma^2/2 (eta_i - 1)]. Vanishes
    /// identically (partial fractions at theta = 0 give sum C_i/eta_i = 1/r).
    double balance_sum = 0.0;
    /// sum_{i=2,3} C_i eta_i [r(1/eta_i - 1) - sigma^2/2 (eta_i - 1)]; positive.
    double weighted_sum = 0.0;
    /// Numerator and denominator of a* = K + K num / den.
    double mod_numerator = 0.0;
    double mod_denominator = 0.0;
    /// num + den; negative iff a* > 0.
    double positivity_margin = 0.0;
    double a_star_mod = 0.0;

    bool all_hold() const;
};

ThresholdDiagnostics threshold_side_conditions(const ScaleBasis& b, const ModelParams& m, const Contract& c);

/// Full price at the contract spot.
PriceReport price(const ScaleBasis& b, const ModelParams& m, const Contract& c);
PriceReport price(const ModelParams& m, const Contract& c);

// --- generator diagnostics -------------------------------------------------------

/// delta such that H(s) = (h/s)^alpha (delta s - r K) below the strike.
double h_delta(const ModelParams& m);

/// H(s) = (L G - r G)(s) for 0 < s < K. Throws DomainError otherwise.
double h_function(const ModelParams& m, const Contract& c, double s);

/// Numerical infinitesimal generator of S applied to f at s:
///   mu~ s f'(s) + sigma^2 s^2 f''(s)/2 + lambda rho int_0^inf (f(s e^{-y}) - f(s)) e^{-rho y} dy
/// with mu~ = r + lambda/(1+rho). Derivatives by five-point central
/// differences with step 1e-3 s; the jump integral by adaptive Gauss-Kronrod, truncated where
/// e^{-rho y} < 1e-14. Throws QuadratureFailure if refinement does not converge.
double generator_apply(const ModelParams& m, const std::function<double(double)>& f, double s);

// --- Black-Scholes reference ------------------------------------------------------

struct BsReference {
    double a_star = 0.0;
    double value = 0.0;
    /// Perpetual American put without cancellation, at the contract spot.
    double plain_put = 0.0;
};

/// Closed forms of the jump-free case. Throws BranchError if lambda > 0.
BsReference bs_reference(const ModelParams& m, const Contract& c);

/// Perpetual American put without cancellation at spot s (jump-free model).
double plain_perpetual_put(const ModelParams& m, double strike, double s);

}  // namespace canput
