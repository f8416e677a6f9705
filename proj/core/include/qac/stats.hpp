#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace qac {

/// Monte Carlo estimate with a blocking error bar. `tau` is the integrated
/// autocorrelation time implied by the blocking plateau; `plateau_level` the
/// blocking level (block size 2^level) the error was read from.
struct Estimate {
    double mean = 0.0;
    double err = 0.0;
    double tau = 0.0;
    std::size_t count = 0;
    int plateau_level = 0;
};

/// Blocking analysis with automatic plateau detection: the error is the
/// largest blocked standard error over levels that retain at least 32
/// blocks (conservative when no clear plateau exists).
Estimate blocking_estimate(std::span<const double> series);

/// Jackknife standard error of f(mean(a), mean(b)) for paired series,
/// for derived quantities such as ratios.
double jackknife_error(std::span<const double> a, std::span<const double> b,
                       const std::function<double(double, double)>& f);

} // namespace qac
