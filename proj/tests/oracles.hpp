// Test-only numerical oracles, independent of the library implementation
// paths they check.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracles {

// Number of eigenvalues of the symmetric tridiagonal (diag, off) below x,
// by the Sturm sequence count.
inline int sturm_count(const std::vector<double>& diag, const std::vector<double>& off,
                       double x) {
    int count = 0;
    double q = 1.0;
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double e2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
        q = diag[i] - x - (i == 0 ? 0.0 : e2 / q);
        if (q == 0.0) q = 1e-300;
        if (q < 0.0) ++count;
    }
    return count;
}

// Lowest k eigenvalues of a symmetric tridiagonal matrix by bisection on the
// Sturm count. Robust and independent of any dense eigensolver.
inline std::vector<double> tridiag_lowest(const std::vector<double>& diag,
                                          const std::vector<double>& off, int k) {
    const std::size_t n = diag.size();
    double lo = diag[0], hi = diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) +
                         (i + 1 < n ? std::abs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    std::vector<double> out(k);
    for (int j = 0; j < k; ++j) {
        double a = lo, b = hi;
        for (int it = 0; it < 90; ++it) {
            const double mid = 0.5 * (a + b);
            (sturm_count(diag, off, mid) <= j ? a : b) = mid;
        }
        out[j] = 0.5 * (a + b);
    }
    return out;
}

// Lowest k levels of H = -(1/2m) d^2/dx^2 + U(x) on [-X, X] with Dirichlet
// walls, on a uniform grid with N interior points.
inline std::vector<double> fd_levels(int k, double mass, const std::function<double(double)>& U,
                                     double X, int N) {
    const double h = 2.0 * X / (N + 1);
    std::vector<double> diag(N), off(N - 1);
    for (int i = 0; i < N; ++i) {
        const double x = -X + h * (i + 1);
        diag[i] = 1.0 / (mass * h * h) + U(x);
    }
    for (int i = 0; i + 1 < N; ++i) off[i] = -0.5 / (mass * h * h);
    return tridiag_lowest(diag, off, k);
}

// Richardson-extrapolated finite-difference oracle: the grid error is O(h^2),
// so (4 E_{2N} - E_N) / 3 removes the leading term.
inline std::vector<double> fd_levels_richardson(int k, double mass,
                                                const std::function<double(double)>& U, double X,
                                                int N) {
    const std::vector<double> coarse = fd_levels(k, mass, U, X, N);
    const std::vector<double> fine = fd_levels(k, mass, U, X, 2 * N);
    std::vector<double> out(k);
    for (int j = 0; j < k; ++j) out[j] = (4.0 * fine[j] - coarse[j]) / 3.0;
    return out;
}

// Deterministic linear-congruential stream for synthetic test series.
struct TestRng {
    std::uint64_t s;
    explicit TestRng(std::uint64_t seed) : s(seed * 2862933555777941757ULL + 3037000493ULL) {}
    double uniform() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    }
    double gaussian() {
        // Box-Muller; fine for test data
        const double u1 = std::max(uniform(), 1e-16), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
};

} // namespace oracles
