#include "qac/special.hpp"

#include <cmath>
#include <vector>

#include "qac/errors.hpp"

namespace qac {

namespace {

// Power series I_0(t) = sum_k (t/2)^{2k} / (k!)^2, all terms positive, so
// the summation is forward stable for any t; used up to the switch point
// where the asymptotic series reaches machine precision.
constexpr double kI0Switch = 30.0;

double i0e_series(double t) {
    const double q = 0.25 * t * t;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 400; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return std::exp(-t) * sum;
}

// Asymptotic series e^{-t} I_0(t) ~ (2 pi t)^{-1/2} sum_k A_k / t^k with
// A_0 = 1, A_k = A_{k-1} (2k-1)^2 / (8k). Optimal truncation error is
// ~e^{-2t}, negligible beyond the switch point.
double i0e_asymptotic(double t) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        const double f = (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * t);
        if (f >= 1.0) break; // series started diverging
        term *= f;
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum / std::sqrt(2.0 * M_PI * t);
}

} // namespace

double bessel_i0e(double t) {
    if (t < 0.0) throw DomainError("bessel_i0e: t must be nonnegative");
    if (t == 0.0) return 1.0;
    return t <= kI0Switch ? i0e_series(t) : i0e_asymptotic(t);
}

void bessel_ine(double t, int nmax, std::span<double> out) {
    if (t < 0.0) throw DomainError("bessel_ine: t must be nonnegative");
    if (nmax < 0 || out.size() < static_cast<std::size_t>(nmax) + 1)
        throw DomainError("bessel_ine: bad output span");
    if (t < 1e-12) {
        // I_n(t) ~ (t/2)^n / n!; below 1e-12 only n = 0 survives in double.
        out[0] = bessel_i0e(t);
        for (int n = 1; n <= nmax; ++n) out[n] = 0.0;
        if (nmax >= 1) out[1] = 0.5 * t * std::exp(-t);
        return;
    }

    const double i0 = bessel_i0e(t);
    // Start the backward recurrence well above both nmax and the turnover
    // index ~t where I_n starts to decay.
    int start = nmax + 16 + static_cast<int>(std::ceil(2.0 * std::sqrt((nmax + 1.0) * (t + 1.0))));
    if (start < static_cast<int>(t)) start = static_cast<int>(t) + nmax + 16;

    for (int attempt = 0; attempt < 4; ++attempt) {
        std::vector<double> y(start + 2, 0.0);
        y[start + 1] = 0.0;
        y[start] = 1e-280;
        for (int k = start; k >= 1; --k) {
            y[k - 1] = y[k + 1] + (2.0 * k / t) * y[k];
            if (y[k - 1] > 1e260) {
                for (int j = k - 1; j <= start + 1; ++j) y[j] *= 1e-260;
            }
        }
        const double scale = i0 / y[0];
        // Self-check: ratio I_1/I_0 must satisfy the Wronskian-like identity
        // I_0' = I_1, verified via the recurrence residual at k=1.
        const double i1 = y[1] * scale;
        const double resid = std::abs(y[0] - (y[2] + (2.0 / t) * y[1])) / y[0];
        if (resid < 1e-12 && std::isfinite(i1)) {
            for (int n = 0; n <= nmax; ++n) out[n] = y[n] * scale;
            return;
        }
        start *= 2;
    }
    throw ConvergenceError("bessel_ine: Miller recurrence failed to stabilize", 0.0);
}

} // namespace qac
