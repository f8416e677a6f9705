#include "qac/stats.hpp"

#include <cmath>
#include <vector>

#include "qac/errors.hpp"

namespace qac {

Estimate blocking_estimate(std::span<const double> series) {
    Estimate est;
    est.count = series.size();
    if (series.empty()) return est;

    double mean = 0.0;
    for (double x : series) mean += x;
    mean /= static_cast<double>(series.size());
    est.mean = mean;
    if (series.size() < 2) return est;

    std::vector<double> data(series.begin(), series.end());
    double naive_var_of_mean = 0.0;
    double best_err = 0.0;
    int best_level = 0;
    int level = 0;
    while (data.size() >= 32) {
        const std::size_t n = data.size();
        double var = 0.0;
        for (double x : data) var += (x - mean) * (x - mean);
        var /= static_cast<double>(n - 1);
        const double err = std::sqrt(var / static_cast<double>(n));
        if (level == 0) naive_var_of_mean = var / static_cast<double>(n);
        if (err >= best_err) {
            best_err = err;
            best_level = level;
        }
        // halve into blocks of 2
        std::vector<double> next(n / 2);
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = 0.5 * (data[2 * i] + data[2 * i + 1]);
        data.swap(next);
        ++level;
    }
    if (best_err == 0.0) {
        // short series: fall back to the naive error
        double var = 0.0;
        for (double x : series) var += (x - mean) * (x - mean);
        var /= static_cast<double>(series.size() - 1);
        best_err = std::sqrt(var / static_cast<double>(series.size()));
    }
    est.err = best_err;
    est.plateau_level = best_level;
    est.tau = naive_var_of_mean > 0.0
                  ? 0.5 * (best_err * best_err) / naive_var_of_mean
                  : 0.0;
    return est;
}

double jackknife_error(std::span<const double> a, std::span<const double> b,
                       const std::function<double(double, double)>& f) {
    if (a.size() != b.size() || a.size() < 2)
        throw DomainError("jackknife_error: need paired series of length >= 2");
    const std::size_t n = a.size();
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sa += a[i];
        sb += b[i];
    }
    std::vector<double> theta(n);
    for (std::size_t i = 0; i < n; ++i)
        theta[i] = f((sa - a[i]) / (n - 1.0), (sb - b[i]) / (n - 1.0));
    double tbar = 0.0;
    for (double t : theta) tbar += t;
    tbar /= static_cast<double>(n);
    double var = 0.0;
    for (double t : theta) var += (t - tbar) * (t - tbar);
    var *= (n - 1.0) / static_cast<double>(n);
    return std::sqrt(var);
}

} // namespace qac
