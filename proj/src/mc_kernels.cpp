#include <omp.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "canput/mc.hpp"
#include "canput/philox.hpp"

namespace canput::mc {

namespace {

enum Stream : std::uint32_t { kDiffusion = 0, kJumps = 1 };

// Random numbers of one path, addressed by (stream, block). Diffusion block k
// serves segments 2k and 2k+1 (one Box-Muller pair plus two 32-bit bridge
// uniforms); jump block j serves the j-th inter-arrival time and jump size.
class PathStreams {
public:
    PathStreams(std::uint64_t seed, std::uint64_t path)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          path_lo_(static_cast<std::uint32_t>(path)),
          path_hi_(static_cast<std::uint32_t>(path >> 32) << 2) {}

    void segment(std::uint64_t k, double& z, double& u) {
        const std::uint64_t block = k >> 1;
        if (block != cached_block_) fill_diffusion(block);
        const bool odd = (k & 1u) != 0;
        z = odd ? z1_ : z0_;
        u = odd ? u1_ : u0_;
    }

    /// Standard exponential variates for jump j.
    void jump(std::uint64_t j, double& wait, double& size) const {
        const PhiloxCounter out = philox4x32_10(counter(j, kJumps), key_);
        wait = -std::log(u01_from64(out[0], out[1]));
        size = -std::log(u01_from64(out[2], out[3]));
    }

private:
    PhiloxCounter counter(std::uint64_t block, Stream stream) const {
        return {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), path_lo_,
                path_hi_ | stream};
    }

    void fill_diffusion(std::uint64_t block) {
        const PhiloxCounter out = philox4x32_10(counter(block, kDiffusion), key_);
        const double radius = std::sqrt(-2.0 * std::log(u01_from32(out[0])));
        const double angle = 2.0 * std::numbers::pi * u01_from32(out[1]);
        z0_ = radius * std::cos(angle);
        z1_ = radius * std::sin(angle);
        u0_ = u01_from32(out[2]);
        u1_ = u01_from32(out[3]);
        cached_block_ = block;
    }

    PhiloxKey key_;
    std::uint32_t path_lo_;
    std::uint32_t path_hi_;
    std::uint64_t cached_block_ = std::numeric_limits<std::uint64_t>::max();
    double z0_ = 0.0, z1_ = 0.0, u0_ = 0.0, u1_ = 0.0;
};

// exp(-exponent) is compared against a uniform only when it can matter.
constexpr double kBridgeCutoff = 40.0;

// Probability that a Brownian bridge from x0 to x1 over duration dt, both ends
// on the same side of `level`, touches it.
inline bool bridge_hits(double x0, double x1, double level, double var_dt, double u) {
    const double e = 2.0 * (x0 - level) * (x1 - level) / var_dt;
    return e < kBridgeCutoff && u < std::exp(-e);
}

}  // namespace

PassageOutcome simulate_path(const Dynamics& dyn, const PassageProblem& prob, const McConfig& cfg,
                             std::uint64_t path_index) {
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    PassageOutcome out;
    out.tau = kNaN;
    out.x_tau = kNaN;

    if (prob.x0 <= prob.log_a) {
        out.tau = 0.0;
        out.x_tau = prob.x0;
        out.x_end = prob.x0;
        out.crossing = Crossing::Immediate;
        if (!prob.track_last_passage) return out;
    }

    PathStreams rng(cfg.seed, path_index);
    const double dt = cfg.dt;
    const double horizon = prob.horizon;
    const double var = dyn.sigma * dyn.sigma;
    const bool has_jumps = dyn.lambda > 0.0;
    const bool bridge = cfg.bridge_correction && var > 0.0;

    const double grid_sd = dyn.sigma * std::sqrt(dt);
    const double grid_drift = dyn.drift * dt;

    bool passed = out.crossing != Crossing::None;
    double x = prob.x0;
    double t = 0.0;
    std::uint64_t grid = 0;
    std::uint64_t seg = 0;
    std::uint64_t jump_idx = 0;
    double next_jump = std::numeric_limits<double>::infinity();
    double pending_size = 0.0;
    if (has_jumps) {
        double wait = 0.0;
        rng.jump(jump_idx, wait, pending_size);
        next_jump = wait / dyn.lambda;
    }

    bool on_grid = true;
    while (t < horizon) {
        const double t_next = static_cast<double>(grid + 1) * dt;
        const double t_grid = std::min(t_next, horizon);
        const bool jump_here = next_jump <= t_grid;
        const double t_end = jump_here ? next_jump : t_grid;

        double z = 0.0, u = 0.0;
        rng.segment(seg++, z, u);
        double x_new;
        double seg_var = var * dt;
        if (on_grid && !jump_here && t_next <= horizon) {
            x_new = x + grid_drift + grid_sd * z;
        } else {
            const double d = t_end - t;
            seg_var = var * d;
            x_new = x + dyn.drift * d + dyn.sigma * std::sqrt(d) * z;
        }

        if (!passed) {
            if (x_new <= prob.log_a || (bridge && bridge_hits(x, x_new, prob.log_a, seg_var, u))) {
                passed = true;
                out.tau = t_end;
                out.x_tau = prob.log_a;
                out.crossing = Crossing::Creep;
                if (!prob.track_last_passage) {
                    out.x_end = x_new;
                    return out;
                }
            }
        } else if (x_new >= prob.log_h || (bridge && bridge_hits(x, x_new, prob.log_h, seg_var, u))) {
            out.above_h_after_tau = true;
            out.x_end = x_new;
            return out;
        }

        x = x_new;
        t = t_end;
        on_grid = !jump_here;
        if (jump_here) {
            x -= pending_size / dyn.rho;
            ++jump_idx;
            double wait = 0.0;
            rng.jump(jump_idx, wait, pending_size);
            next_jump = t + wait / dyn.lambda;
            if (!passed && x <= prob.log_a) {
                passed = true;
                out.tau = t;
                out.x_tau = x;
                out.crossing = Crossing::Jump;
                if (!prob.track_last_passage) {
                    out.x_end = x;
                    return out;
                }
            }
        } else {
            ++grid;
        }
    }
    out.x_end = x;
    return out;
}

std::vector<PassageOutcome> run_passage_kernel(const Dynamics& dyn, const PassageProblem& prob,
                                               const McConfig& cfg) {
    const auto n = static_cast<std::int64_t>(cfg.n_paths);
    std::vector<PassageOutcome> outcomes(cfg.n_paths);
    const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
    for (std::int64_t i = 0; i < n; ++i) {
        outcomes[static_cast<std::size_t>(i)] = simulate_path(dyn, prob, cfg, static_cast<std::uint64_t>(i));
    }
    return outcomes;
}

namespace reference {

std::vector<PassageOutcome> run_passage_kernel(const Dynamics& dyn, const PassageProblem& prob,
                                               const McConfig& cfg) {
    std::vector<PassageOutcome> outcomes;
    outcomes.reserve(cfg.n_paths);
    for (std::uint64_t i = 0; i < cfg.n_paths; ++i) outcomes.push_back(simulate_path(dyn, prob, cfg, i));
    return outcomes;
}

}  // namespace reference

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kLeaf = 32;
    if (values.size() <= kLeaf) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace canput::mc
