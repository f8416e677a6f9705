#pragma once

#include <span>
#include <vector>

namespace qac {

/// Phi(theta) = sum_{s=2}^{r} (2s)! / (2^{s-1} (s-1)!) b_s theta^{s-1}
/// for coefficients (b_1..b_r); b_1 does not enter. Strictly increasing on
/// theta > 0 when some b_s > 0, s >= 2. Coefficients b_s < 0 for s >= 2 are
/// rejected (monotonicity and root uniqueness would fail).
double phi_series(std::span<const double> coeffs, double theta);

/// Unique positive root of a + 2 b_1 + Phi(theta) = 0, which exists when
/// 2 b_1 < -a (double-well regime) and some b_s > 0, s >= 2. Bracketed
/// bisection polished to 1e-12 relative.
double theta_star(std::span<const double> coeffs, double rigidity_a);

/// Closed phi^4 form theta* = (2b - a) nu / (4 b2 (nu + 2)) for the well
/// V(u) = -b|u|^2 + b2|u|^4 with b > a/2, b2 > 0.
double theta_star_phi4(double a, double b, double b2, int nu);

/// Validated bundle of a double-well coefficient set with its theta*.
struct AnharmonicityProfile {
    std::vector<double> coeffs;
    double rigidity_a = 0.0;
    double theta_star = 0.0;
};
AnharmonicityProfile anharmonicity_profile(std::span<const double> coeffs, double rigidity_a);

} // namespace qac
