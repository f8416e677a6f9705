#include "qac/anharmonicity.hpp"

#include <cmath>

#include "qac/errors.hpp"

namespace qac {

namespace {

void check_coeffs(std::span<const double> coeffs) {
    if (coeffs.size() < 2)
        throw DomainError("anharmonicity: coefficient list must reach s = 2 (r >= 2)");
    bool any_positive = false;
    for (std::size_t s = 2; s <= coeffs.size(); ++s) {
        const double b = coeffs[s - 1];
        if (b < 0.0)
            throw DomainError("anharmonicity: b_s must be nonnegative for s >= 2");
        if (b > 0.0) any_positive = true;
    }
    if (!any_positive)
        throw DomainError("anharmonicity: some b_s must be positive for s >= 2");
}

// (2s)! / (2^{s-1} (s-1)!)
double phi_weight(std::size_t s) {
    double w = 1.0;
    for (std::size_t j = 1; j <= 2 * s; ++j) w *= static_cast<double>(j);
    for (std::size_t j = 1; j < s; ++j) w /= 2.0 * static_cast<double>(j);
    return w;
}

} // namespace

double phi_series(std::span<const double> coeffs, double theta) {
    check_coeffs(coeffs);
    if (!(theta > 0.0)) throw DomainError("phi_series: theta must be positive");
    double phi = 0.0;
    double theta_pow = theta; // theta^{s-1} starting at s = 2
    for (std::size_t s = 2; s <= coeffs.size(); ++s) {
        phi += phi_weight(s) * coeffs[s - 1] * theta_pow;
        theta_pow *= theta;
    }
    return phi;
}

double theta_star(std::span<const double> coeffs, double rigidity_a) {
    check_coeffs(coeffs);
    const double offset = rigidity_a + 2.0 * coeffs[0];
    if (!(offset < 0.0))
        throw DomainError("theta_star: no double-well regime (requires 2 b_1 < -a)");
    const double target = -offset; // solve Phi(theta) = -(a + 2 b_1) > 0

    double lo = 1e-12, hi = 1.0;
    while (phi_series(coeffs, hi) < target) {
        hi *= 2.0;
        if (hi > 1e100) throw ConvergenceError("theta_star: bracket expansion failed", hi);
    }
    if (phi_series(coeffs, lo) > target) lo = 1e-300;
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        (phi_series(coeffs, mid) < target ? lo : hi) = mid;
        if (hi - lo <= 1e-14 * hi) break;
    }
    return 0.5 * (lo + hi);
}

double theta_star_phi4(double a, double b, double b2, int nu) {
    if (nu < 1) throw DomainError("theta_star_phi4: nu must be >= 1");
    if (!(b2 > 0.0)) throw DomainError("theta_star_phi4: b2 must be positive");
    if (!(b > 0.5 * a)) throw DomainError("theta_star_phi4: no double-well regime (b <= a/2)");
    return (2.0 * b - a) * nu / (4.0 * b2 * (nu + 2.0));
}

AnharmonicityProfile anharmonicity_profile(std::span<const double> coeffs, double rigidity_a) {
    AnharmonicityProfile prof;
    prof.coeffs.assign(coeffs.begin(), coeffs.end());
    prof.rigidity_a = rigidity_a;
    prof.theta_star = theta_star(coeffs, rigidity_a);
    const double resid = rigidity_a + 2.0 * coeffs[0] + phi_series(coeffs, prof.theta_star);
    const double scale = std::max(std::abs(rigidity_a), std::abs(2.0 * coeffs[0]));
    if (std::abs(resid) > 1e-12 * std::max(scale, 1.0))
        throw ConsistencyError("anharmonicity_profile: root residual too large",
                               std::abs(resid));
    return prof;
}

} // namespace qac
