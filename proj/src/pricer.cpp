#include "canput/pricer.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cassert>
#include <cmath>
#include <sstream>

#include "canput/errors.hpp"

namespace canput {

namespace {

constexpr double kClampSlack = 1e-10;

double clamp_unit(double v, const char* what, Warnings* warnings) {
    if ((v < -kClampSlack || v > 1.0 + kClampSlack) && warnings) {
        std::ostringstream os;
        os << what << " = " << v << " left [0, 1] by more than " << kClampSlack << "; clamped";
        warnings->push_back(os.str());
    }
    return std::clamp(v, 0.0, 1.0);
}

void require_threshold(const Contract& c, double a) {
    if (!(a > 0.0 && a < c.strike)) {
        std::ostringstream os;
        os << "threshold a = " << a << " outside (0, K = " << c.strike << ")";
        throw DomainError(os.str());
    }
}

// sum_{i>=2} C_i eta_i [r(1/eta_i - 1) - sigma^2/2 (eta_i - 1)] and
// sum_{i>=2} C_i eta_i (eta_i - 1).
struct TailSums {
    double weighted = 0.0;
    double curvature = 0.0;
    double balance = 0.0;
};

TailSums tail_sums(const ScaleBasis& b, const ModelParams& m) {
    TailSums t;
    const double r = m.r();
    const double hs2 = 0.5 * m.sigma2();
    for (int i = 1; i < b.terms; ++i) {
        const double e = b.eta[i];
        const double bracket = r * (1.0 / e - 1.0) - hs2 * (e - 1.0);
        t.balance += b.c[i] * bracket;
        t.weighted += b.c[i] * e * bracket;
        t.curvature += b.c[i] * e * (e - 1.0);
    }
    return t;
}

}  // namespace

Contract make_contract(double strike, double barrier, double spot) {
    std::ostringstream os;
    if (!(strike > 0.0) || !std::isfinite(strike)) {
        os << "strike must be positive (got " << strike << ")";
        throw InvalidParams(os.str());
    }
    if (!(barrier > strike) || !std::isfinite(barrier)) {
        os << "barrier h = " << barrier << " must exceed strike K = " << strike;
        throw InvalidParams(os.str());
    }
    if (!(spot > 0.0) || !std::isfinite(spot)) {
        os << "spot must be positive (got " << spot << ")";
        throw InvalidParams(os.str());
    }
    return Contract{strike, barrier, spot};
}

const char* to_string(Region region) {
    return region == Region::Exercise ? "Exercise" : "Continuation";
}

double g_payoff(const ModelParams& m, const Contract& c, double s) {
    if (s >= c.strike) return 0.0;
    const double survival = s < c.barrier ? std::pow(c.barrier / s, m.alpha()) : 1.0;
    return (c.strike - s) * survival;
}

double g_payoff_derivative(const ModelParams& m, const Contract& c, double s) {
    const double alpha = m.alpha();
    const double z = std::pow(c.barrier / s, alpha);
    return -z - alpha * (c.strike - s) * z / s;
}

double g_integral(const ModelParams& m, const Contract& c, double a) {
    require_threshold(c, a);
    if (!m.has_jumps()) return 0.0;
    const double alpha = m.alpha();
    const double rho = m.rho();
    return std::pow(c.barrier / a, alpha) * rho * (c.strike / (rho - alpha) - a / (rho - alpha + 1.0));
}

// Both factors are written with the e^{eta_1 x} terms cancelled analytically
// (Phi(r) = eta_1), so only decaying exponentials remain.
double creeping_factor(const ScaleBasis& b, const ModelParams& m, double s, double a, Warnings* warnings) {
    const double x = std::log(s / a);
    if (x <= 0.0) return 1.0;
    double acc = 0.0;
    for (int i = 1; i < b.terms; ++i) acc += b.c[i] * (b.eta[i] - b.phi_r) * std::exp(b.eta[i] * x);
    return clamp_unit(0.5 * m.sigma2() * acc, "creeping factor", warnings);
}

double undershoot_factor(const ScaleBasis& b, const ModelParams& m, double s, double a, Warnings* warnings) {
    if (!m.has_jumps()) return 0.0;
    const double x = std::log(s / a);
    if (x <= 0.0) return 0.0;
    const double r = m.r();
    const double hs2 = 0.5 * m.sigma2();
    const double phi = b.phi_r;
    const double k = r / phi - phi * hs2;
    double acc = 1.0 - r * b.c[0] / b.eta[0];
    for (int i = 1; i < b.terms; ++i) {
        const double e = b.eta[i];
        const double ex = std::exp(e * x);
        acc += b.c[i] * (r * std::expm1(e * x) / e - hs2 * e * ex - k * ex);
    }
    return clamp_unit(acc, "undershoot factor", warnings);
}

double value_at_threshold(const ScaleBasis& b, const ModelParams& m, const Contract& c, double s, double a) {
    require_threshold(c, a);
    if (s < a) return g_payoff(m, c, s);
    double v = creeping_factor(b, m, s, a) * g_payoff(m, c, a);
    if (m.has_jumps()) v += undershoot_factor(b, m, s, a) * g_integral(m, c, a);
    return v;
}

bool ThresholdDiagnostics::all_hold() const {
    if (!applicable) return true;
    return c2 < 0.0 && c3 < 0.0 && weighted_sum > 0.0 && mod_numerator > 0.0 && mod_denominator < 0.0 &&
           positivity_margin < 0.0;
}

ThresholdDiagnostics threshold_side_conditions(const ScaleBasis& b, const ModelParams& m, const Contract& c) {
    ThresholdDiagnostics d;
    if (!m.has_jumps()) return d;
    d.applicable = true;
    d.c2 = b.c[1];
    d.c3 = b.c[2];

    const double r = m.r();
    const double hs2 = 0.5 * m.sigma2();
    const double rho = m.rho();
    const double alpha = m.alpha();
    const double q0 = rho / (rho - alpha);
    const double q1 = rho / (rho - alpha + 1.0);

    const TailSums t = tail_sums(b, m);
    d.balance_sum = t.balance;
    d.weighted_sum = t.weighted;
    d.mod_numerator = 1.0 + rho / ((rho - alpha) * (rho - alpha + 1.0)) * t.weighted;

    double den = alpha - 1.0;
    double pos = alpha;
    for (int i = 1; i < b.terms; ++i) {
        const double e = b.eta[i];
        den += b.c[i] * e * (r * q1 * (1.0 / e - 1.0) + hs2 * (e - 1.0) * (1.0 - q1));
        pos += b.c[i] * e * (q0 * r * (1.0 / e - 1.0) + hs2 * (e - 1.0) * (1.0 - q0));
    }
    d.mod_denominator = den;
    d.positivity_margin = pos;
    d.a_star_mod = c.strike + c.strike * d.mod_numerator / d.mod_denominator;
    return d;
}

double optimal_threshold(const ScaleBasis& b, const ModelParams& m, const Contract& c) {
    const double K = c.strike;
    const double alpha = m.alpha();
    double a_star = 0.0;
    if (!m.has_jumps()) {
        const double e2 = b.eta[1];
        a_star = K * (e2 + alpha) / (e2 + alpha - 1.0);
    } else {
        assert(threshold_side_conditions(b, m, c).all_hold());
        const double rho = m.rho();
        const double hs2 = 0.5 * m.sigma2();
        const TailSums t = tail_sums(b, m);
        const double num = hs2 * t.curvature + alpha + rho / (rho - alpha) * t.weighted;
        const double den = hs2 * t.curvature - (1.0 - alpha) + rho / (rho - alpha + 1.0) * t.weighted;
        a_star = K * num / den;
    }
    if (!(a_star > 0.0 && a_star < K)) {
        std::ostringstream os;
        os << "optimal threshold a* = " << a_star << " outside (0, K = " << K
           << "); parameters outside the regime where the closed form applies";
        throw ThresholdOutOfRange(os.str());
    }
    return a_star;
}

PriceReport price(const ScaleBasis& b, const ModelParams& m, const Contract& c) {
    PriceReport rep;
    rep.a_star = optimal_threshold(b, m, c);
    rep.g_at_a = g_payoff(m, c, rep.a_star);
    rep.g_integral = g_integral(m, c, rep.a_star);
    if (c.spot <= rep.a_star) {
        rep.region = Region::Exercise;
        rep.value = g_payoff(m, c, c.spot);
        rep.creeping_factor = 1.0;
        rep.undershoot_factor = 0.0;
        return rep;
    }
    rep.region = Region::Continuation;
    rep.creeping_factor = creeping_factor(b, m, c.spot, rep.a_star, &rep.warnings);
    rep.undershoot_factor = undershoot_factor(b, m, c.spot, rep.a_star, &rep.warnings);
    rep.value = rep.creeping_factor * rep.g_at_a + rep.undershoot_factor * rep.g_integral;
    return rep;
}

PriceReport price(const ModelParams& m, const Contract& c) { return price(make_scale_basis(m), m, c); }

double h_delta(const ModelParams& m) {
    const double alpha = m.alpha();
    double delta = alpha * m.sigma2();
    if (m.has_jumps()) {
        const double lam = m.lambda();
        const double rho = m.rho();
        delta += -lam / (1.0 + rho) + lam * rho / ((rho - alpha) * (1.0 + rho - alpha));
    }
    return delta;
}

double h_function(const ModelParams& m, const Contract& c, double s) {
    if (!(s > 0.0 && s < c.strike)) {
        std::ostringstream os;
        os << "H(s) is defined for 0 < s < K; got s = " << s;
        throw DomainError(os.str());
    }
    return std::pow(c.barrier / s, m.alpha()) * (h_delta(m) * s - m.r() * c.strike);
}

double generator_apply(const ModelParams& m, const std::function<double(double)>& f, double s) {
    if (!(s > 0.0)) throw DomainError("generator evaluated at non-positive spot");
    // Five-point stencils; with step 1e-3 s both truncation and roundoff stay
    // near 1e-10 relative for smooth f.
    const double step = 1e-3 * s;
    const double f0 = f(s);
    const double fp1 = f(s + step), fm1 = f(s - step);
    const double fp2 = f(s + 2.0 * step), fm2 = f(s - 2.0 * step);
    const double d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * step);
    const double d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * step * step);

    const double lam = m.lambda();
    const double rho = m.rho();
    const double mu_tilde = m.r() + (m.has_jumps() ? lam / (1.0 + rho) : 0.0);
    double v = mu_tilde * s * d1 + 0.5 * m.sigma2() * s * s * d2;
    if (!m.has_jumps()) return v;

    // e^{-rho y} < 1e-14 beyond this point.
    const double y_max = 14.0 * std::log(10.0) / rho;
    auto integrand = [&](double y) { return (f(s * std::exp(-y)) - f0) * std::exp(-rho * y); };
    double err = 0.0;
    double l1 = 0.0;
    constexpr unsigned kMaxDepth = 20;
    constexpr double kTol = 1e-12;
    const double jump = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, y_max,
                                                                                       kMaxDepth, kTol, &err, &l1);
    if (!std::isfinite(jump) || err > 1e3 * kTol * std::max(l1, 1e-300) + 1e-15) {
        std::ostringstream os;
        os << "jump integral did not converge at s = " << s << " (error estimate " << err << ", L1 " << l1 << ")";
        throw QuadratureFailure(os.str());
    }
    return v + lam * rho * jump;
}

double plain_perpetual_put(const ModelParams& m, double strike, double s) {
    if (m.has_jumps()) throw BranchError("plain perpetual put closed form requires lambda == 0");
    const double am = -2.0 * m.r() / m.sigma2();
    const double boundary = strike / (1.0 - 1.0 / am);
    if (s <= boundary) return strike - s;
    const double B = -(1.0 / am) * std::pow(boundary, 1.0 - am);
    return B * std::pow(s, am);
}

BsReference bs_reference(const ModelParams& m, const Contract& c) {
    if (m.has_jumps()) throw BranchError("Black-Scholes reference formulas require lambda == 0");
    const double K = c.strike;
    const double alpha = m.alpha();
    const double e2 = -2.0 * m.r() / m.sigma2();
    BsReference ref;
    ref.a_star = K * (e2 + alpha) / (e2 + alpha - 1.0);
    ref.value = (K - ref.a_star) * std::pow(c.spot / ref.a_star, e2) * std::pow(c.barrier / ref.a_star, alpha);
    ref.plain_put = plain_perpetual_put(m, K, c.spot);
    return ref;
}

}  // namespace canput
