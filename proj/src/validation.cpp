#include "canput/validation.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "canput/errors.hpp"
#include "canput/numdiff.hpp"

namespace canput::validation {

namespace {

std::string fmt(std::initializer_list<std::pair<const char*, double>> items) {
    std::ostringstream os;
    os.precision(6);
    bool first = true;
    for (const auto& [k, v] : items) {
        if (!first) os << ", ";
        os << k << '=' << v;
        first = false;
    }
    return os.str();
}

Check make_check(std::string name, bool ok, std::string detail) {
    return Check{std::move(name), ok, std::move(detail)};
}

}  // namespace

double root_residual(const ModelParams& m, double theta) {
    if (!m.has_jumps()) return scale_root_polynomial(m, theta);
    return scale_root_polynomial(m, theta) / (theta + m.rho());
}

double truncated_laplace_transform(const ScaleBasis& b, double beta, double upper) {
    auto f = [&](double x) { return std::exp(-beta * x) * w_r(b, x); };
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, upper, 25, 1e-14, &err);
}

double laplace_truncation_bound(const ScaleBasis& b, double beta, double upper) {
    double bound = 0.0;
    for (int i = 0; i < b.terms; ++i)
        bound += std::abs(b.c[i]) * std::exp((b.eta[i] - beta) * upper) / (beta - b.eta[i]);
    return bound;
}

double smooth_fit_mismatch(const ScaleBasis& b, const ModelParams& m, const Contract& c, double a_star) {
    auto value = [&](double s) { return value_at_threshold(b, m, c, s, a_star); };
    const double dv = right_derivative_richardson(value, a_star);
    return std::abs(dv - g_payoff_derivative(m, c, a_star));
}

double threshold_sensitivity(const ScaleBasis& b, const ModelParams& m, const Contract& c, double s, double a) {
    return central_derivative([&](double x) { return value_at_threshold(b, m, c, s, x); }, a);
}

std::vector<Check> analytic_suite(const ModelParams& m, const Contract& c) {
    std::vector<Check> out;
    const double r = m.r();
    const double K = c.strike;

    {
        const double e1 = std::abs(laplace_exponent(m, 1.0) - r);
        const double e2 = std::abs(laplace_exponent(m, -m.alpha()));
        out.push_back(make_check("martingale drift and alpha root", e1 <= 1e-12 * r && e2 <= 1e-12,
                                 fmt({{"|Psi(1)-r|", e1}, {"|Psi(-alpha)|", e2}, {"alpha", m.alpha()}})));
    }

    const ScaleBasis b = make_scale_basis(m);
    {
        double worst = 0.0;
        for (int i = 0; i < b.terms; ++i) worst = std::max(worst, std::abs(root_residual(m, b.eta[i])));
        double sum_c = 0.0, sum_ce = 0.0;
        for (int i = 0; i < b.terms; ++i) {
            sum_c += b.c[i];
            sum_ce += b.c[i] * b.eta[i];
        }
        const double target = 2.0 / m.sigma2();
        const bool ok = worst <= 1e-10 && std::abs(sum_c) <= 1e-12 && std::abs(sum_ce - target) <= 1e-10 * target;
        out.push_back(make_check("scale exponents and coefficients", ok,
                                 fmt({{"max|Psi(eta)-r|", worst}, {"sum C", sum_c}, {"sum C eta", sum_ce}})));
    }

    {
        constexpr double kUpper = 40.0;
        bool ok = true;
        double worst = 0.0;
        for (double beta : {1.5, 2.0, 3.0}) {
            const double numeric = truncated_laplace_transform(b, beta, kUpper);
            const double exact = 1.0 / (laplace_exponent(m, beta) - r);
            const double err = std::abs(numeric - exact);
            ok = ok && err <= laplace_truncation_bound(b, beta, kUpper) + 1e-8;
            worst = std::max(worst, err);
        }
        out.push_back(make_check("Laplace transform of W", ok, fmt({{"max error", worst}})));
    }

    double a_star = 0.0;
    try {
        a_star = optimal_threshold(b, m, c);
        out.push_back(make_check("optimal threshold in (0, K)", true, fmt({{"a*", a_star}})));
    } catch (const ThresholdOutOfRange& e) {
        out.push_back(make_check("optimal threshold in (0, K)", false, e.what()));
        return out;
    }

    if (m.has_jumps()) {
        const ThresholdDiagnostics d = threshold_side_conditions(b, m, c);
        const bool ok = d.all_hold() && std::abs(d.a_star_mod - a_star) <= 1e-9 * K &&
                        std::abs(d.balance_sum) <= 1e-9;
        out.push_back(make_check("threshold side conditions", ok,
                                 fmt({{"C2", d.c2},
                                      {"C3", d.c3},
                                      {"weighted sum", d.weighted_sum},
                                      {"balance sum", d.balance_sum},
                                      {"a* (rewritten)", d.a_star_mod}})));
    }

    {
        const double vm = std::abs(value_at_threshold(b, m, c, a_star, a_star) - g_payoff(m, c, a_star));
        const double sf = smooth_fit_mismatch(b, m, c, a_star);
        const double gp = std::abs(g_payoff_derivative(m, c, a_star));
        out.push_back(make_check("value matching", vm <= 1e-10 * K, fmt({{"|V(a*)-G(a*)|", vm}})));
        out.push_back(make_check("smooth fit", sf <= 1e-6 * gp, fmt({{"|V'(a*+)-G'(a*)|", sf}, {"|G'(a*)|", gp}})));
    }

    {
        double worst = 0.0;
        for (double s : {1.1 * a_star, c.spot, 2.0 * K})
            worst = std::max(worst, std::abs(threshold_sensitivity(b, m, c, s, a_star)));
        out.push_back(make_check("first-order condition in a", worst <= 1e-6, fmt({{"max |dV/da|", worst}})));
    }

    {
        constexpr int kPoints = 10000;
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 1; i <= kPoints; ++i) {
            const double s = a_star * i / (kPoints + 1.0);
            worst = std::max(worst, h_function(m, c, s));
        }
        out.push_back(make_check("H < 0 below a*", worst < 0.0, fmt({{"max H", worst}})));
    }

    {
        constexpr int kPoints = 100;
        const double lo = 0.1 * K;
        const double hi = 0.9 * a_star;
        auto G = [&](double s) { return g_payoff(m, c, s); };
        double worst = 0.0;
        for (int i = 0; i < kPoints; ++i) {
            const double s = lo + (hi - lo) * i / (kPoints - 1.0);
            const double numeric = generator_apply(m, G, s) - r * G(s);
            const double closed = h_function(m, c, s);
            worst = std::max(worst, std::abs(numeric - closed) / std::abs(closed));
        }
        out.push_back(make_check("generator matches H", worst <= 1e-6, fmt({{"max rel error", worst}})));
    }

    {
        constexpr int kPoints = 500;
        const double lo = std::log(0.1 * a_star);
        const double hi = std::log(5.0 * c.barrier);
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kPoints; ++i) {
            const double s = std::exp(lo + (hi - lo) * i / (kPoints - 1.0));
            worst = std::min(worst, value_at_threshold(b, m, c, s, a_star) - g_payoff(m, c, s));
        }
        out.push_back(make_check("value dominates payoff", worst >= -1e-9, fmt({{"min V-G", worst}})));
    }

    if (!m.has_jumps()) {
        const BsReference ref = bs_reference(m, c);
        const PriceReport rep = price(b, m, c);
        bool below_plain = true;
        for (int i = 0; i < 500; ++i) {
            const double s = 0.1 * a_star * std::pow(50.0 * c.barrier / a_star, i / 499.0);
            below_plain = below_plain && value_at_threshold(b, m, c, s, a_star) <= plain_perpetual_put(m, K, s);
        }
        const bool agree = std::abs(ref.a_star - a_star) <= 1e-9 * K &&
                           (rep.region == Region::Exercise || std::abs(ref.value - rep.value) <= 1e-9 * K);
        out.push_back(make_check("agrees with Black-Scholes reference", agree,
                                 fmt({{"a* ref", ref.a_star}, {"value ref", ref.value}, {"plain put", ref.plain_put}})));
        out.push_back(make_check("cancellable <= plain put", below_plain, ""));
    }

    {
        std::vector<double> grid;
        for (int i = 1; i < static_cast<int>(std::lround(K / 0.01)); ++i) grid.push_back(i * 0.01);
        const auto res = mc::reference::grid_search_threshold_closed_form(m, c, grid);
        out.push_back(make_check("closed-form a* matches grid argmax", std::abs(res.a_hat - a_star) <= 0.01,
                                 fmt({{"grid argmax", res.a_hat}, {"a*", a_star}})));
    }
    return out;
}

std::vector<Check> mc_suite(const ModelParams& m, const Contract& c, const McSuiteConfig& cfg) {
    std::vector<Check> out;
    const ScaleBasis b = make_scale_basis(m);
    const double a_star = optimal_threshold(b, m, c);
    if (c.spot <= a_star) {
        out.push_back(make_check("Monte Carlo suite", true, "spot in exercise region; nothing to simulate"));
        return out;
    }
    const double closed = value_at_threshold(b, m, c, c.spot, a_star);
    const double rel_budget = m.has_jumps() ? 0.015 : 0.01;

    mc::McConfig sw = cfg.survival;
    sw.mode = mc::Mode::SurvivalWeighted;
    const auto outcomes = mc::run_threshold_paths(m, c, a_star, sw);
    const mc::McEstimate v_sw = mc::value_from_outcomes(m, c, outcomes, sw);
    {
        const double tol = std::max(3.0 * v_sw.std_error, rel_budget * closed);
        out.push_back(make_check("survival-weighted MC vs closed form", std::abs(v_sw.mean - closed) <= tol,
                                 fmt({{"mc", v_sw.mean}, {"stderr", v_sw.std_error}, {"closed", closed}})));
    }

    {
        const mc::PassageFactors f = mc::passage_factors_from_outcomes(m, outcomes, sw);
        const double creep = creeping_factor(b, m, c.spot, a_star);
        const double under = undershoot_factor(b, m, c.spot, a_star);
        const bool ok = std::abs(f.creep.mean - creep) <= 3.0 * f.creep.std_error + 0.01 * creep &&
                        std::abs(f.undershoot.mean - under) <= 3.0 * f.undershoot.std_error + 0.01 * under;
        out.push_back(make_check("passage factors vs closed form", ok,
                                 fmt({{"creep mc", f.creep.mean},
                                      {"creep", creep},
                                      {"undershoot mc", f.undershoot.mean},
                                      {"undershoot", under}})));
    }

    if (m.has_jumps()) {
        const mc::UndershootSample u = mc::undershoot_sample(outcomes, a_star);
        const bool ok = u.count > 0 && std::abs(u.mean - 1.0 / m.rho()) <= 3.0 * u.std_error;
        out.push_back(make_check("undershoot is Exp(rho)", ok,
                                 fmt({{"mean", u.mean}, {"stderr", u.std_error}, {"count", double(u.count)}})));
    }

    {
        mc::McConfig direct = cfg.direct;
        direct.mode = mc::Mode::DirectLastPassage;
        const mc::McEstimate v_d = mc::estimate_value(m, c, a_star, direct);
        const double tol = 3.0 * std::hypot(v_sw.std_error, v_d.std_error) + v_d.truncation_bound;
        out.push_back(make_check("direct last-passage vs survival-weighted", std::abs(v_d.mean - v_sw.mean) <= tol,
                                 fmt({{"direct", v_d.mean}, {"stderr", v_d.std_error}, {"survival", v_sw.mean}})));
    }

    {
        const mc::McEstimate mart = mc::discounted_terminal_price(m, c.spot, 1.0, sw);
        out.push_back(make_check("discounted price is a martingale", std::abs(mart.mean - c.spot) <= 3.0 * mart.std_error,
                                 fmt({{"E[e^{-r}S_1]", mart.mean}, {"stderr", mart.std_error}, {"s0", c.spot}})));
    }

    {
        mc::McConfig on = sw;
        on.n_paths = std::min(sw.n_paths, cfg.ordering_paths);
        on.bridge_correction = true;
        mc::McConfig off = on;
        off.bridge_correction = false;
        mc::PassageProblem prob{std::log(c.spot), std::log(a_star), std::log(c.barrier), sw.horizon, false};
        const auto with = mc::run_passage_kernel(mc::Dynamics::from(m), prob, on);
        const auto without = mc::run_passage_kernel(mc::Dynamics::from(m), prob, off);
        bool pathwise = true;
        double sum_on = 0.0, sum_off = 0.0;
        for (std::size_t i = 0; i < with.size(); ++i) {
            const double t_on = with[i].crossing == mc::Crossing::None ? sw.horizon : with[i].tau;
            const double t_off = without[i].crossing == mc::Crossing::None ? sw.horizon : without[i].tau;
            pathwise = pathwise && t_on <= t_off;
            sum_on += t_on;
            sum_off += t_off;
        }
        out.push_back(make_check("bridge correction detects crossings earlier", pathwise && sum_on <= sum_off,
                                 fmt({{"mean tau (bridge)", sum_on / with.size()},
                                      {"mean tau (grid)", sum_off / with.size()}})));
    }
    return out;
}

}  // namespace canput::validation
