#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "canput/mc.hpp"

namespace canput::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kBadInput = 2, kIoError = 3 };

/// Everything the subcommands need, after flags and the optional key = value
/// config file are merged (flags win).
struct RunConfig {
    std::optional<double> r;
    std::optional<double> sigma2;
    std::optional<double> sigma;
    double lambda = 0.0;
    std::optional<double> rho;
    std::optional<double> strike;
    std::optional<double> barrier;
    std::optional<double> spot;

    // Monte Carlo
    std::size_t paths = 100000;
    double dt = 1e-3;
    double horizon = 200.0;
    std::optional<std::uint64_t> seed;
    bool bridge = true;
    std::string mode = "survival";
    int workers = 0;
};

/// Runs the command line. Normal output goes to `out`, diagnostics to `err`.
/// Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 12 significant digits, as used in every JSON and CSV number.
std::string format_number(double v);

}  // namespace canput::cli
