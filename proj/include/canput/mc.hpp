#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "canput/levy_model.hpp"
#include "canput/pricer.hpp"

namespace canput::mc {

enum class Mode { SurvivalWeighted, DirectLastPassage };

const char* to_string(Mode mode);

struct McConfig {
    std::size_t n_paths = 100000;
    double dt = 1e-3;
    double horizon = 200.0;
    std::uint64_t seed = 0;
    bool bridge_correction = true;
    Mode mode = Mode::SurvivalWeighted;
    /// OpenMP thread count; 0 uses the runtime default. Results never depend
    /// on this value.
    int workers = 0;
};

/// Throws ConfigError unless n_paths >= 100, 0 < dt <= 0.01 and
/// horizon >= 10 / r.
void validate_config(const McConfig& cfg, const ModelParams& m);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    /// e^{-r T} K: bound on the value lost to horizon truncation.
    double truncation_bound = 0.0;
    std::string discretization_note;
};

/// Driving parameters of the log-price: X_t = x0 + drift t + sigma B_t - jumps.
/// Normally taken from a ModelParams; constructible directly for tests of
/// limits the martingale constraint excludes.
struct Dynamics {
    double drift = 0.0;
    double sigma = 0.0;
    double lambda = 0.0;
    double rho = 1.0;

    static Dynamics from(const ModelParams& m);
};

enum class Crossing : std::uint8_t { None, Immediate, Creep, Jump };

const char* to_string(Crossing crossing);

struct PassageProblem {
    double x0 = 0.0;
    double log_a = 0.0;
    double log_h = 0.0;
    double horizon = 0.0;
    /// Continue after the first passage to see whether the path returns
    /// above log_h before the horizon.
    bool track_last_passage = false;
};

struct PassageOutcome {
    /// First-passage time; NaN when the horizon was reached first.
    double tau = 0.0;
    /// Log-price at the passage: log_a for a diffusive crossing, the exact
    /// post-jump level for a jump crossing.
    double x_tau = 0.0;
    /// Log-price where simulation ended (horizon, passage or return above h).
    double x_end = 0.0;
    Crossing crossing = Crossing::None;
    /// Only meaningful with track_last_passage: the path was at or above h at
    /// some time after tau, i.e. tau < theta_T.
    bool above_h_after_tau = false;
};

// --- kernels ---------------------------------------------------------------

/// Simulates one path. Jump epochs and sizes are exact; the Brownian part is
/// sampled exactly on a grid of step dt (split at jump epochs). With
/// bridge_correction each sub-segment also crosses with the Brownian-bridge
/// probability. All randomness is addressed by (seed, path_index, segment),
/// so the path skeleton does not depend on the barrier or the bridge flag.
PassageOutcome simulate_path(const Dynamics& dyn, const PassageProblem& prob, const McConfig& cfg,
                             std::uint64_t path_index);

/// OpenMP-parallel loop over paths 0..n_paths-1.
std::vector<PassageOutcome> run_passage_kernel(const Dynamics& dyn, const PassageProblem& prob,
                                               const McConfig& cfg);

namespace reference {
/// Serial loop, kept as the reference for the parallel kernel.
std::vector<PassageOutcome> run_passage_kernel(const Dynamics& dyn, const PassageProblem& prob,
                                               const McConfig& cfg);
}  // namespace reference

/// Pairwise summation; result depends only on the order of `values`.
double pairwise_sum(std::span<const double> values);

/// Sample mean and standard error of per-path contributions.
McEstimate summarize(std::span<const double> contributions);

// --- estimators ----------------------------------------------------------------

struct FirstPassage {
    std::optional<double> tau;
    std::optional<double> s_tau;
    Crossing crossing = Crossing::None;
};

FirstPassage simulate_to_threshold(const ModelParams& m, const Contract& c, double a, const McConfig& cfg,
                                   std::uint64_t path_index);
FirstPassage simulate_to_threshold(const Dynamics& dyn, double s0, double a, const McConfig& cfg,
                                   std::uint64_t path_index);

/// All path outcomes for the threshold policy at a, in the mode's layout.
std::vector<PassageOutcome> run_threshold_paths(const ModelParams& m, const Contract& c, double a,
                                                const McConfig& cfg);

/// Value of the threshold-a policy. SurvivalWeighted averages e^{-r tau} G(S_tau);
/// DirectLastPassage averages e^{-r tau}(K - S_tau)^+ 1{tau < theta_T}.
/// Throws ConfigError unless 0 < a < min(K, spot) and cfg is valid.
McEstimate estimate_value(const ModelParams& m, const Contract& c, double a, const McConfig& cfg);

/// Same, from outcomes already produced by run_threshold_paths.
McEstimate value_from_outcomes(const ModelParams& m, const Contract& c, std::span<const PassageOutcome> outcomes,
                               const McConfig& cfg);

struct PassageFactors {
    McEstimate creep;
    McEstimate undershoot;
};

PassageFactors estimate_passage_factors(const ModelParams& m, const Contract& c, double a, const McConfig& cfg);
PassageFactors passage_factors_from_outcomes(const ModelParams& m, std::span<const PassageOutcome> outcomes,
                                             const McConfig& cfg);

/// Mean and standard error of log(a) - X_tau over jump crossings, plus their count.
struct UndershootSample {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

UndershootSample undershoot_sample(std::span<const PassageOutcome> outcomes, double a);

/// e^{-r T} S_T per path, averaged; equals s0 under the martingale measure.
McEstimate discounted_terminal_price(const ModelParams& m, double s0, double t, const McConfig& cfg);

enum class GridObjective { ClosedForm, MonteCarlo };

struct GridSearchResult {
    double a_hat = 0.0;
    std::vector<double> values;
};

/// Argmax over a_grid of the threshold-policy value at the contract spot. The
/// MonteCarlo objective reuses the same seed at every grid point (common
/// random numbers). Throws ConfigError on an empty or unsorted grid, or one
/// leaving (0, K).
GridSearchResult grid_search_threshold(const ModelParams& m, const Contract& c, const McConfig& cfg,
                                       std::span<const double> a_grid,
                                       GridObjective objective = GridObjective::ClosedForm);

namespace reference {
GridSearchResult grid_search_threshold_closed_form(const ModelParams& m, const Contract& c,
                                                   std::span<const double> a_grid);
}  // namespace reference

/// CSV dump: path_index,tau,s_tau,crossing_type (empty tau/s_tau when truncated).
void write_trace_csv(std::ostream& out, std::span<const PassageOutcome> outcomes);

}  // namespace canput::mc
