// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Heavy Monte Carlo criteria use the full production settings.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "canput/errors.hpp"
#include "canput/mc.hpp"
#include "canput/numdiff.hpp"
#include "canput/pricer.hpp"
#include "canput/scale_functions.hpp"
#include "canput/validation.hpp"

using namespace canput;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

struct Bench {
    ModelParams m;
    ScaleBasis b;
    Contract c;
    const char* name;
};

Bench bs_bench() {
    const ModelParams m = make_model(0.05, 0.2, 0.0, 0.0);
    return {m, make_scale_basis(m), make_contract(100.0, 120.0, 110.0), "BS"};
}

Bench jump_bench() {
    const ModelParams m = make_model(0.05, 0.2, 5.0, 2.0);
    return {m, make_scale_basis(m), make_contract(100.0, 120.0, 110.0), "jump"};
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= budget_s;
    const bool ok = o.passed && in_time;
    if (!ok) ++failures;
    std::printf("%s  [%2d] %-40s %s | %.3f s (budget %g s)%s\n", ok ? "PASS" : "FAIL", id, name, o.detail.c_str(),
                secs, budget_s, in_time ? "" : " OVER BUDGET");
    std::fflush(stdout);
}

mc::McConfig production_config(std::uint64_t seed) {
    mc::McConfig cfg;
    cfg.n_paths = 100000;
    cfg.dt = 1e-3;
    cfg.horizon = 200.0;
    cfg.seed = seed;
    cfg.bridge_correction = true;
    return cfg;
}

// Direct last-passage runs follow every unrescued path to the horizon, so
// they use a coarser grid and fewer paths.
mc::McConfig direct_config(std::uint64_t seed) {
    mc::McConfig cfg = production_config(seed);
    cfg.n_paths = 20000;
    cfg.dt = 1e-2;
    cfg.mode = mc::Mode::DirectLastPassage;
    return cfg;
}

}  // namespace

int main() {
    std::vector<mc::PassageOutcome> jump_survival_paths;
    double jump_a_star = 0.0;

    criterion(1, "Black-Scholes benchmark", 0.010, [] {
        const Bench k = bs_bench();
        const PriceReport rep = price(k.b, k.m, k.c);
        const double plain = plain_perpetual_put(k.m, k.c.strike, k.c.spot);
        const double exact = 250.0 / std::sqrt(132.0);
        const bool ok = std::abs(rep.a_star - 50.0) <= 1e-9 && std::abs(rep.value - exact) <= 1e-9 &&
                        std::abs(rep.value - 21.76) <= 5e-3 && std::abs(plain - 36.70) <= 5e-3;
        return Outcome{ok, fmt("a*=%.12g V=%.12g plain=%.6f", rep.a_star, rep.value, plain)};
    });

    criterion(2, "jump benchmark", 0.010, [] {
        const Bench k = jump_bench();
        const PriceReport rep = price(k.b, k.m, k.c);
        const bool ok = std::abs(rep.a_star - 63.18) <= 1e-2 && std::abs(rep.value - 18.99) <= 1e-2;
        return Outcome{ok, fmt("a*=%.8g V=%.8g", rep.a_star, rep.value)};
    });

    criterion(3, "closed-form a* equals grid argmax", 1.0, [] {
        bool ok = true;
        std::string detail;
        for (const Bench& k : {bs_bench(), jump_bench()}) {
            std::vector<double> grid;
            for (int i = 1; i < 10000; ++i) grid.push_back(0.01 * i);
            const mc::GridSearchResult res = mc::grid_search_threshold(k.m, k.c, mc::McConfig{}, grid);
            const double a = optimal_threshold(k.b, k.m, k.c);
            ok = ok && std::abs(res.a_hat - a) <= 0.01 + 1e-12;
            detail += std::string(k.name) + fmt(": grid=%.2f a*=%.6f  ", res.a_hat, a);
        }
        return Outcome{ok, detail};
    });

    criterion(4, "Laplace transform of W", 1.0, [] {
        const Bench k = jump_bench();
        const double upper = 40.0;
        bool ok = true;
        double worst = 0.0;
        for (double beta : {1.5, 2.0, 3.0}) {
            const double got = validation::truncated_laplace_transform(k.b, beta, upper);
            const double want = 1.0 / (laplace_exponent(k.m, beta) - k.m.r());
            const double err = std::abs(got - want);
            ok = ok && err <= validation::laplace_truncation_bound(k.b, beta, upper) + 1e-8;
            worst = std::max(worst, err);
        }
        return Outcome{ok, fmt("max |error|=%.3g (upper limit %g)", worst, upper)};
    });

    criterion(5, "value matching and smooth fit", 1.0, [] {
        bool ok = true;
        std::string detail;
        for (const Bench& k : {bs_bench(), jump_bench()}) {
            const double a = optimal_threshold(k.b, k.m, k.c);
            const double vm = std::abs(value_at_threshold(k.b, k.m, k.c, a, a) - g_payoff(k.m, k.c, a));
            const double sf = validation::smooth_fit_mismatch(k.b, k.m, k.c, a);
            const double g1 = std::abs(g_payoff_derivative(k.m, k.c, a));
            ok = ok && vm <= 1e-10 * k.c.strike && sf <= 1e-6 * g1;
            detail += std::string(k.name) + fmt(": |V-G|=%.2g |dV-dG|/|dG|=%.2g  ", vm, sf / g1);
        }
        return Outcome{ok, detail};
    });

    criterion(6, "HJB sign and generator cross-check", 5.0, [] {
        bool ok = true;
        std::string detail;
        for (const Bench& k : {bs_bench(), jump_bench()}) {
            const double a = optimal_threshold(k.b, k.m, k.c);
            double max_h = -INFINITY;
            for (int i = 1; i <= 10000; ++i) max_h = std::max(max_h, h_function(k.m, k.c, a * i / 10001.0));
            const auto G = [&](double s) { return g_payoff(k.m, k.c, s); };
            double worst = 0.0;
            for (int i = 0; i < 100; ++i) {
                const double s = 0.1 * k.c.strike + (0.9 * a - 0.1 * k.c.strike) * i / 99.0;
                const double h = h_function(k.m, k.c, s);
                worst = std::max(worst, std::abs(generator_apply(k.m, G, s) - k.m.r() * G(s) - h) / std::abs(h));
            }
            ok = ok && max_h < 0.0 && worst <= 1e-6;
            detail += std::string(k.name) + fmt(": max H=%.3g gen rel err=%.2g  ", max_h, worst);
        }
        return Outcome{ok, detail};
    });

    criterion(7, "Monte Carlo agreement", 300.0, [&] {
        bool ok = true;
        std::string detail;
        for (const Bench& k : {bs_bench(), jump_bench()}) {
            const bool jumps = k.m.has_jumps();
            const double a = optimal_threshold(k.b, k.m, k.c);
            const double closed = value_at_threshold(k.b, k.m, k.c, k.c.spot, a);
            const mc::McConfig sw_cfg = production_config(20260101);
            auto outcomes = mc::run_threshold_paths(k.m, k.c, a, sw_cfg);
            const mc::McEstimate sw = mc::value_from_outcomes(k.m, k.c, outcomes, sw_cfg);
            const double budget = std::max(3.0 * sw.std_error, (jumps ? 0.015 : 0.01) * closed);
            const bool sw_ok = std::abs(sw.mean - closed) <= budget;

            const mc::McEstimate direct = mc::estimate_value(k.m, k.c, a, direct_config(20260102));
            const double combined = std::hypot(sw.std_error, direct.std_error);
            const bool d_ok = std::abs(direct.mean - sw.mean) <= 3.0 * combined + direct.truncation_bound;

            ok = ok && sw_ok && d_ok;
            detail += std::string(k.name) + fmt(": SW=%.4f+-%.4f closed=%.4f direct=%.4f  ", sw.mean, sw.std_error,
                                                 closed, direct.mean);
            if (jumps) {
                jump_survival_paths = std::move(outcomes);
                jump_a_star = a;
            }
        }
        return Outcome{ok, detail};
    });

    criterion(8, "undershoot is Exp(rho)", 60.0, [&] {
        const Bench k = jump_bench();
        if (jump_survival_paths.empty()) {
            jump_a_star = optimal_threshold(k.b, k.m, k.c);
            jump_survival_paths = mc::run_threshold_paths(k.m, k.c, jump_a_star, production_config(20260101));
        }
        const mc::UndershootSample u = mc::undershoot_sample(jump_survival_paths, jump_a_star);
        const double target = 1.0 / k.m.rho();
        const bool ok = u.count >= 10000 && std::abs(u.mean - target) <= 3.0 * u.std_error;
        return Outcome{ok, fmt("mean=%.5f stderr=%.5f crossings=%.0f target=%.1f", u.mean, u.std_error,
                               static_cast<double>(u.count), target)};
    });

    criterion(9, "small-jump continuity", 1.0, [] {
        const Bench k = bs_bench();
        const ModelParams tiny = make_model(0.05, 0.2, 1e-6, 2.0);
        const PriceReport a = price(tiny, k.c);
        const PriceReport b = price(k.b, k.m, k.c);
        const double ea = std::abs(a.a_star - b.a_star) / b.a_star;
        const double ev = std::abs(a.value - b.value) / b.value;
        return Outcome{ea <= 1e-4 && ev <= 1e-4, fmt("rel diff a*=%.3g V=%.3g", ea, ev)};
    });

    criterion(10, "determinism across worker counts", 120.0, [] {
        const Bench k = jump_bench();
        const double a = optimal_threshold(k.b, k.m, k.c);
        mc::McConfig cfg = production_config(4242);
        cfg.n_paths = 20000;
        cfg.workers = 1;
        const mc::McEstimate one = mc::estimate_value(k.m, k.c, a, cfg);
        cfg.workers = 4;
        const mc::McEstimate four = mc::estimate_value(k.m, k.c, a, cfg);
        const bool ok = one.mean == four.mean && one.std_error == four.std_error;
        return Outcome{ok, fmt("workers=1: %.17g  workers=4: %.17g", one.mean, four.mean)};
    });

    std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
