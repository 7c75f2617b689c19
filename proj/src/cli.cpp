#include "canput/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "canput/errors.hpp"
#include "canput/pricer.hpp"
#include "canput/validation.hpp"

namespace canput::cli {

using Json = nlohmann::ordered_json;

namespace {

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("IoError", what) {}
};

Json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::stod(format_number(v));
}

struct Inputs {
    ModelParams model;
    Contract contract;
};

Inputs resolve(const RunConfig& cfg) {
    auto need = [](const std::optional<double>& v, const char* name) {
        if (!v) throw InvalidParams(std::string("missing required parameter --") + name);
        return *v;
    };
    double sigma2 = 0.0;
    if (cfg.sigma2 && cfg.sigma) throw InvalidParams("give either --sigma2 or --sigma, not both");
    if (cfg.sigma) sigma2 = *cfg.sigma * *cfg.sigma;
    else sigma2 = need(cfg.sigma2, "sigma2");
    if (cfg.lambda > 0.0 && !cfg.rho) throw InvalidParams("--rho is required when --lambda > 0");
    const double rho = cfg.rho.value_or(0.0);
    ModelParams m = make_model(need(cfg.r, "r"), sigma2, cfg.lambda, rho);
    Contract c = make_contract(need(cfg.strike, "strike"), need(cfg.barrier, "barrier"), need(cfg.spot, "spot"));
    return Inputs{m, c};
}

mc::McConfig mc_config(const RunConfig& cfg, const ModelParams& m) {
    if (!cfg.seed) throw ConfigError("randomized commands require an explicit --seed");
    mc::McConfig mcfg;
    mcfg.n_paths = cfg.paths;
    mcfg.dt = cfg.dt;
    mcfg.horizon = cfg.horizon;
    mcfg.seed = *cfg.seed;
    mcfg.bridge_correction = cfg.bridge;
    mcfg.workers = cfg.workers;
    if (cfg.mode == "survival") mcfg.mode = mc::Mode::SurvivalWeighted;
    else if (cfg.mode == "direct") mcfg.mode = mc::Mode::DirectLastPassage;
    else throw ConfigError("--mode must be 'survival' or 'direct'");
    mc::validate_config(mcfg, m);
    return mcfg;
}

Json params_echo(const RunConfig& cfg, const Inputs& in) {
    Json p;
    p["r"] = number(in.model.r());
    p["sigma2"] = number(in.model.sigma2());
    p["lambda"] = number(in.model.lambda());
    p["rho"] = cfg.rho ? number(*cfg.rho) : Json(nullptr);
    p["strike"] = number(in.contract.strike);
    p["barrier"] = number(in.contract.barrier);
    p["spot"] = number(in.contract.spot);
    p["mu"] = number(in.model.mu());
    p["alpha"] = number(in.model.alpha());
    return p;
}

Json estimate_json(const mc::McEstimate& e) {
    Json j;
    j["mean"] = number(e.mean);
    j["stderr"] = number(e.std_error);
    j["n_paths"] = e.n_paths;
    j["truncation_bound"] = number(e.truncation_bound);
    j["discretization_note"] = e.discretization_note;
    return j;
}

int cmd_price(const RunConfig& cfg, std::ostream& out) {
    const Inputs in = resolve(cfg);
    const PriceReport rep = price(in.model, in.contract);
    Json j;
    j["a_star"] = number(rep.a_star);
    j["value"] = number(rep.value);
    j["creeping_factor"] = number(rep.creeping_factor);
    j["undershoot_factor"] = number(rep.undershoot_factor);
    j["g_at_a"] = number(rep.g_at_a);
    j["g_integral"] = number(rep.g_integral);
    j["region"] = to_string(rep.region);
    j["warnings"] = rep.warnings;
    j["params_echo"] = params_echo(cfg, in);
    out << j.dump(2) << '\n';
    return kOk;
}

std::vector<double> threshold_grid(double strike, double step) {
    if (!(step > 0.0 && step < strike)) throw InvalidParams("--grid-step must lie in (0, K)");
    std::vector<double> grid;
    for (long i = 1;; ++i) {
        const double a = static_cast<double>(i) * step;
        if (a >= strike * (1.0 - 1e-12)) break;
        grid.push_back(a);
    }
    return grid;
}

int cmd_threshold(const RunConfig& cfg, double grid_step, bool mc_objective, std::ostream& out) {
    const Inputs in = resolve(cfg);
    const ScaleBasis basis = make_scale_basis(in.model);
    const double a_star = optimal_threshold(basis, in.model, in.contract);
    Json j;
    j["a_star"] = number(a_star);
    j["grid_argmax"] = nullptr;
    j["grid_step"] = nullptr;
    j["objective"] = nullptr;
    if (grid_step > 0.0) {
        const auto grid = threshold_grid(in.contract.strike, grid_step);
        mc::McConfig mcfg;
        if (mc_objective) mcfg = mc_config(cfg, in.model);
        else mcfg.workers = cfg.workers;
        const auto res = mc::grid_search_threshold(in.model, in.contract, mcfg, grid,
                                                   mc_objective ? mc::GridObjective::MonteCarlo
                                                                : mc::GridObjective::ClosedForm);
        j["grid_argmax"] = number(res.a_hat);
        j["grid_step"] = number(grid_step);
        j["objective"] = mc_objective ? "monte_carlo" : "closed_form";
    }
    j["params_echo"] = params_echo(cfg, in);
    out << j.dump(2) << '\n';
    return kOk;
}

int cmd_curve(const RunConfig& cfg, double smin, double smax, int points, const std::string& path) {
    const Inputs in = resolve(cfg);
    if (!(smin > 0.0 && smin < smax)) throw InvalidParams("curve needs 0 < smin < smax");
    if (points < 2) throw InvalidParams("curve needs at least 2 points");
    const ScaleBasis basis = make_scale_basis(in.model);
    const double a_star = optimal_threshold(basis, in.model, in.contract);

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    file << "s,payoff,value\n";
    for (int i = 0; i < points; ++i) {
        const double s = i == points - 1 ? smax : smin + (smax - smin) * i / (points - 1.0);
        const double g = g_payoff(in.model, in.contract, s);
        const double v = value_at_threshold(basis, in.model, in.contract, s, a_star);
        file << format_number(s) << ',' << format_number(g) << ',' << format_number(v) << '\n';
    }
    file.close();
    if (!file) throw IoError("failed writing '" + path + "'");
    return kOk;
}

int cmd_validate(const RunConfig& cfg, const std::string& suite, std::size_t direct_paths, double direct_dt,
                 std::ostream& out) {
    const Inputs in = resolve(cfg);
    if (suite != "analytic" && suite != "mc" && suite != "all")
        throw InvalidParams("--suite must be analytic, mc or all");

    std::vector<validation::Check> checks;
    if (suite != "mc") checks = validation::analytic_suite(in.model, in.contract);
    if (suite != "analytic") {
        validation::McSuiteConfig mcfg;
        mcfg.survival = mc_config(cfg, in.model);
        mcfg.direct = mcfg.survival;
        mcfg.direct.n_paths = direct_paths;
        mcfg.direct.dt = direct_dt;
        mc::validate_config(mcfg.direct, in.model);
        const auto more = validation::mc_suite(in.model, in.contract, mcfg);
        checks.insert(checks.end(), more.begin(), more.end());
    }

    bool all = true;
    std::size_t width = 0;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    for (const auto& c : checks) {
        all = all && c.passed;
        out << (c.passed ? "PASS  " : "FAIL  ") << c.name << std::string(width - c.name.size() + 2, ' ') << c.detail
            << '\n';
    }
    out << (all ? "all checks passed" : "some checks FAILED") << " (" << checks.size() << " checks)\n";
    return all ? kOk : kValidationFailed;
}

int cmd_simulate(const RunConfig& cfg, std::optional<double> threshold, const std::string& trace,
                 std::ostream& out) {
    const Inputs in = resolve(cfg);
    const mc::McConfig mcfg = mc_config(cfg, in.model);
    const ScaleBasis basis = make_scale_basis(in.model);
    const double a = threshold ? *threshold : optimal_threshold(basis, in.model, in.contract);

    const auto outcomes = mc::run_threshold_paths(in.model, in.contract, a, mcfg);
    const mc::McEstimate value = mc::value_from_outcomes(in.model, in.contract, outcomes, mcfg);
    const mc::PassageFactors factors = mc::passage_factors_from_outcomes(in.model, outcomes, mcfg);

    if (!trace.empty()) {
        std::ofstream file(trace, std::ios::binary | std::ios::trunc);
        if (!file) throw IoError("cannot open '" + trace + "' for writing");
        mc::write_trace_csv(file, outcomes);
        if (!file) throw IoError("failed writing '" + trace + "'");
    }

    Json j;
    j["threshold"] = number(a);
    j["mode"] = to_string(mcfg.mode);
    j["seed"] = mcfg.seed;
    j["estimate"] = estimate_json(value);
    j["creeping"] = estimate_json(factors.creep);
    j["undershoot"] = estimate_json(factors.undershoot);
    j["closed_form_value"] = number(value_at_threshold(basis, in.model, in.contract, in.contract.spot, a));
    j["params_echo"] = params_echo(cfg, in);
    out << j.dump(2) << '\n';
    return kOk;
}

void error_json(std::ostream& out, const std::string& kind, const std::string& message) {
    Json j;
    j["error"] = message;
    j["kind"] = kind;
    out << j.dump(2) << '\n';
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Perpetual American put cancelled at the last passage above a barrier"};
    app.name("canput");
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "flat key = value file; command-line flags take precedence");

    app.add_option("--r", cfg.r, "risk-free rate");
    app.add_option("--sigma2", cfg.sigma2, "diffusion variance sigma^2");
    app.add_option("--sigma", cfg.sigma, "volatility sigma (squared into sigma2)");
    app.add_option("--lambda", cfg.lambda, "jump intensity");
    app.add_option("--rho", cfg.rho, "rate of the exponential jump sizes");
    app.add_option("--strike", cfg.strike, "strike K");
    app.add_option("--barrier", cfg.barrier, "cancellation barrier h > K");
    app.add_option("--spot", cfg.spot, "spot price");

    app.add_option("--paths", cfg.paths, "Monte Carlo paths");
    app.add_option("--dt", cfg.dt, "Brownian grid step");
    app.add_option("--horizon", cfg.horizon, "simulation horizon T");
    app.add_option("--seed", cfg.seed, "64-bit seed (required for randomized commands)");
    app.add_flag("--bridge,!--no-bridge", cfg.bridge, "Brownian-bridge crossing correction (default on)");
    app.add_option("--mode", cfg.mode, "survival | direct");
    app.add_option("--workers", cfg.workers, "OpenMP threads (0 = runtime default)");

    auto* price_cmd = app.add_subcommand("price", "closed-form price and optimal threshold (JSON)");

    double grid_step = 0.0;
    bool mc_grid = false;
    auto* threshold_cmd = app.add_subcommand("threshold", "optimal threshold, optionally checked on a grid (JSON)");
    threshold_cmd->add_option("--grid-step", grid_step, "also report the argmax over a grid with this step");
    threshold_cmd->add_flag("--mc-grid", mc_grid, "use Monte Carlo values on the grid");

    double smin = 0.0, smax = 0.0;
    int points = 0;
    std::string out_path;
    auto* curve_cmd = app.add_subcommand("curve", "payoff and price curves as CSV");
    curve_cmd->add_option("--smin", smin)->required();
    curve_cmd->add_option("--smax", smax)->required();
    curve_cmd->add_option("--points", points)->required();
    curve_cmd->add_option("--out", out_path)->required();

    std::string suite = "analytic";
    std::size_t direct_paths = 20000;
    double direct_dt = 1e-2;
    auto* validate_cmd = app.add_subcommand("validate", "run the invariant suites and print a pass/fail table");
    validate_cmd->add_option("--suite", suite, "analytic | mc | all");
    validate_cmd->add_option("--direct-paths", direct_paths, "paths for the direct last-passage run");
    validate_cmd->add_option("--direct-dt", direct_dt, "grid step for the direct last-passage run");

    std::optional<double> sim_threshold;
    std::string trace;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of a threshold policy (JSON)");
    simulate_cmd->add_option("--threshold", sim_threshold, "exercise threshold (default: closed-form a*)");
    simulate_cmd->add_option("--trace", trace, "write per-path CSV trace to this file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        error_json(out, "ParseError", e.what());
        err << e.what() << '\n';
        return kBadInput;
    }

    try {
        if (price_cmd->parsed()) return cmd_price(cfg, out);
        if (threshold_cmd->parsed()) return cmd_threshold(cfg, grid_step, mc_grid, out);
        if (curve_cmd->parsed()) return cmd_curve(cfg, smin, smax, points, out_path);
        if (validate_cmd->parsed()) return cmd_validate(cfg, suite, direct_paths, direct_dt, out);
        if (simulate_cmd->parsed()) return cmd_simulate(cfg, sim_threshold, trace, out);
    } catch (const IoError& e) {
        error_json(out, e.kind(), e.what());
        err << e.what() << '\n';
        return kIoError;
    } catch (const Error& e) {
        error_json(out, e.kind(), e.what());
        err << e.what() << '\n';
        return kBadInput;
    }
    return kBadInput;
}

}  // namespace canput::cli
