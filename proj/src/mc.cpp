#include "canput/mc.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "canput/errors.hpp"
#include "canput/scale_functions.hpp"

namespace canput::mc {

namespace {

std::string describe(const McConfig& cfg) {
    std::ostringstream os;
    os << "exact jumps; Brownian grid dt=" << cfg.dt << "; bridge correction "
       << (cfg.bridge_correction ? "on" : "off") << "; horizon T=" << cfg.horizon << "; mode " << to_string(cfg.mode);
    return os.str();
}

void require_policy_threshold(const Contract& c, double a) {
    if (!(a > 0.0 && a < std::min(c.strike, c.spot))) {
        std::ostringstream os;
        os << "threshold a = " << a << " must lie in (0, min(K, spot) = " << std::min(c.strike, c.spot) << ")";
        throw ConfigError(os.str());
    }
}

double discount(const ModelParams& m, double tau) { return std::exp(-m.r() * tau); }

}  // namespace

const char* to_string(Mode mode) { return mode == Mode::DirectLastPassage ? "direct" : "survival"; }

const char* to_string(Crossing crossing) {
    switch (crossing) {
        case Crossing::Immediate: return "immediate";
        case Crossing::Creep: return "creep";
        case Crossing::Jump: return "jump";
        case Crossing::None: break;
    }
    return "none";
}

void validate_config(const McConfig& cfg, const ModelParams& m) {
    std::ostringstream os;
    if (cfg.n_paths < 100) {
        os << "n_paths must be >= 100 (got " << cfg.n_paths << ")";
        throw ConfigError(os.str());
    }
    if (!(cfg.dt > 0.0 && cfg.dt <= 0.01)) {
        os << "dt must lie in (0, 0.01] (got " << cfg.dt << ")";
        throw ConfigError(os.str());
    }
    if (!(cfg.horizon >= 10.0 / m.r()) || !std::isfinite(cfg.horizon)) {
        os << "horizon must be >= 10/r = " << 10.0 / m.r() << " (got " << cfg.horizon << ")";
        throw ConfigError(os.str());
    }
    if (cfg.workers < 0) throw ConfigError("workers must be >= 0");
}

Dynamics Dynamics::from(const ModelParams& m) {
    return Dynamics{m.mu(), m.sigma(), m.lambda(), m.has_jumps() ? m.rho() : 1.0};
}

McEstimate summarize(std::span<const double> contributions) {
    McEstimate est;
    const std::size_t n = contributions.size();
    est.n_paths = n;
    if (n == 0) return est;
    est.mean = pairwise_sum(contributions) / static_cast<double>(n);
    if (n > 1) {
        std::vector<double> sq(n);
        std::transform(contributions.begin(), contributions.end(), sq.begin(), [&](double v) {
            const double d = v - est.mean;
            return d * d;
        });
        const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
        est.std_error = std::sqrt(var / static_cast<double>(n));
    }
    return est;
}

FirstPassage simulate_to_threshold(const Dynamics& dyn, double s0, double a, const McConfig& cfg,
                                   std::uint64_t path_index) {
    PassageProblem prob;
    prob.x0 = std::log(s0);
    prob.log_a = std::log(a);
    prob.log_h = std::numeric_limits<double>::infinity();
    prob.horizon = cfg.horizon;
    const PassageOutcome o = simulate_path(dyn, prob, cfg, path_index);
    FirstPassage fp;
    fp.crossing = o.crossing;
    if (o.crossing != Crossing::None) {
        fp.tau = o.tau;
        fp.s_tau = std::exp(o.x_tau);
    }
    return fp;
}

FirstPassage simulate_to_threshold(const ModelParams& m, const Contract& c, double a, const McConfig& cfg,
                                   std::uint64_t path_index) {
    return simulate_to_threshold(Dynamics::from(m), c.spot, a, cfg, path_index);
}

std::vector<PassageOutcome> run_threshold_paths(const ModelParams& m, const Contract& c, double a,
                                                const McConfig& cfg) {
    validate_config(cfg, m);
    require_policy_threshold(c, a);
    PassageProblem prob;
    prob.x0 = std::log(c.spot);
    prob.log_a = std::log(a);
    prob.log_h = std::log(c.barrier);
    prob.horizon = cfg.horizon;
    prob.track_last_passage = cfg.mode == Mode::DirectLastPassage;
    return run_passage_kernel(Dynamics::from(m), prob, cfg);
}

McEstimate value_from_outcomes(const ModelParams& m, const Contract& c, std::span<const PassageOutcome> outcomes,
                               const McConfig& cfg) {
    std::vector<double> contrib(outcomes.size(), 0.0);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const PassageOutcome& o = outcomes[i];
        if (o.crossing == Crossing::None) continue;
        const double s_tau = std::exp(o.x_tau);
        if (cfg.mode == Mode::SurvivalWeighted) {
            contrib[i] = discount(m, o.tau) * g_payoff(m, c, s_tau);
        } else if (o.above_h_after_tau) {
            contrib[i] = discount(m, o.tau) * std::max(c.strike - s_tau, 0.0);
        }
    }
    McEstimate est = summarize(contrib);
    est.truncation_bound = std::exp(-m.r() * cfg.horizon) * c.strike;
    est.discretization_note = describe(cfg);
    return est;
}

McEstimate estimate_value(const ModelParams& m, const Contract& c, double a, const McConfig& cfg) {
    const auto outcomes = run_threshold_paths(m, c, a, cfg);
    return value_from_outcomes(m, c, outcomes, cfg);
}

PassageFactors passage_factors_from_outcomes(const ModelParams& m, std::span<const PassageOutcome> outcomes,
                                             const McConfig& cfg) {
    std::vector<double> creep(outcomes.size(), 0.0);
    std::vector<double> under(outcomes.size(), 0.0);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const PassageOutcome& o = outcomes[i];
        switch (o.crossing) {
            case Crossing::Immediate:
            case Crossing::Creep: creep[i] = discount(m, o.tau); break;
            case Crossing::Jump: under[i] = discount(m, o.tau); break;
            case Crossing::None: break;
        }
    }
    PassageFactors f{summarize(creep), summarize(under)};
    // Horizon truncation can only lose e^{-rT} per path.
    f.creep.truncation_bound = f.undershoot.truncation_bound = std::exp(-m.r() * cfg.horizon);
    f.creep.discretization_note = f.undershoot.discretization_note = describe(cfg);
    return f;
}

PassageFactors estimate_passage_factors(const ModelParams& m, const Contract& c, double a, const McConfig& cfg) {
    const auto outcomes = run_threshold_paths(m, c, a, cfg);
    return passage_factors_from_outcomes(m, outcomes, cfg);
}

UndershootSample undershoot_sample(std::span<const PassageOutcome> outcomes, double a) {
    const double log_a = std::log(a);
    std::vector<double> depth;
    for (const auto& o : outcomes)
        if (o.crossing == Crossing::Jump) depth.push_back(log_a - o.x_tau);
    const McEstimate e = summarize(depth);
    return UndershootSample{e.mean, e.std_error, depth.size()};
}

McEstimate discounted_terminal_price(const ModelParams& m, double s0, double t, const McConfig& cfg) {
    if (!(t > 0.0)) throw ConfigError("terminal time must be positive");
    if (!(s0 > 0.0)) throw ConfigError("spot must be positive");
    PassageProblem prob;
    prob.x0 = std::log(s0);
    prob.log_a = -std::numeric_limits<double>::infinity();
    prob.log_h = std::numeric_limits<double>::infinity();
    prob.horizon = t;
    const auto outcomes = run_passage_kernel(Dynamics::from(m), prob, cfg);
    std::vector<double> values(outcomes.size());
    const double df = std::exp(-m.r() * t);
    std::transform(outcomes.begin(), outcomes.end(), values.begin(),
                   [&](const PassageOutcome& o) { return df * std::exp(o.x_end); });
    McEstimate est = summarize(values);
    est.discretization_note = describe(cfg);
    return est;
}

namespace {

void validate_grid(const Contract& c, std::span<const double> a_grid) {
    if (a_grid.empty()) throw ConfigError("threshold grid is empty");
    if (!std::is_sorted(a_grid.begin(), a_grid.end())) throw ConfigError("threshold grid must be sorted");
    if (!(a_grid.front() > 0.0 && a_grid.back() < c.strike))
        throw ConfigError("threshold grid must lie inside (0, K)");
}

GridSearchResult pick_argmax(std::span<const double> a_grid, std::vector<double> values) {
    const auto it = std::max_element(values.begin(), values.end());
    GridSearchResult res;
    res.a_hat = a_grid[static_cast<std::size_t>(it - values.begin())];
    res.values = std::move(values);
    return res;
}

}  // namespace

GridSearchResult grid_search_threshold(const ModelParams& m, const Contract& c, const McConfig& cfg,
                                       std::span<const double> a_grid, GridObjective objective) {
    validate_grid(c, a_grid);
    std::vector<double> values(a_grid.size());
    if (objective == GridObjective::ClosedForm) {
        const ScaleBasis basis = make_scale_basis(m);
        const auto n = static_cast<std::int64_t>(a_grid.size());
        const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
        for (std::int64_t i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            values[k] = value_at_threshold(basis, m, c, c.spot, a_grid[k]);
        }
    } else {
        for (std::size_t k = 0; k < a_grid.size(); ++k) values[k] = estimate_value(m, c, a_grid[k], cfg).mean;
    }
    return pick_argmax(a_grid, std::move(values));
}

namespace reference {

GridSearchResult grid_search_threshold_closed_form(const ModelParams& m, const Contract& c,
                                                   std::span<const double> a_grid) {
    validate_grid(c, a_grid);
    const ScaleBasis basis = make_scale_basis(m);
    std::vector<double> values;
    values.reserve(a_grid.size());
    for (double a : a_grid) values.push_back(value_at_threshold(basis, m, c, c.spot, a));
    return pick_argmax(a_grid, std::move(values));
}

}  // namespace reference

void write_trace_csv(std::ostream& out, std::span<const PassageOutcome> outcomes) {
    out << "path_index,tau,s_tau,crossing_type\n";
    std::ostringstream line;
    line.precision(12);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const PassageOutcome& o = outcomes[i];
        line.str("");
        line << i << ',';
        if (o.crossing != Crossing::None) line << o.tau << ',' << std::exp(o.x_tau);
        else line << ',';
        line << ',' << to_string(o.crossing) << '\n';
        out << line.str();
    }
}

}  // namespace canput::mc
