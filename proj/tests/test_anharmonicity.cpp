#include <doctest.h>

#include <cmath>
#include <vector>

#include "qac/anharmonicity.hpp"
#include "qac/errors.hpp"

using namespace qac;

TEST_CASE("phi series single-term factorial weights") {
    const std::vector<double> r2 = {0.0, 1.0};
    CHECK(phi_series(r2, 1.0) == doctest::Approx(12.0));
    const std::vector<double> r3 = {0.0, 0.0, 1.0};
    CHECK(phi_series(r3, 1.0) == doctest::Approx(90.0));
    CHECK(phi_series(r2, 1e-9) == doctest::Approx(12e-9).epsilon(1e-12));
}

TEST_CASE("phi rejects negative higher coefficients") {
    const std::vector<double> bad = {0.0, -1.0};
    CHECK_THROWS_AS(phi_series(bad, 1.0), DomainError);
}

TEST_CASE("theta* closed forms and residual") {
    const std::vector<double> quartic = {-1.0, 1.0};
    const double ts = theta_star(quartic, 1.0);
    CHECK(ts == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    CHECK(std::abs(1.0 + 2.0 * (-1.0) + phi_series(quartic, ts)) < 1e-12);

    // r = 3 with only b3: 90 theta^2 = 1
    const std::vector<double> sextic = {-1.0, 0.0, 1.0};
    CHECK(theta_star(sextic, 1.0) == doctest::Approx(1.0 / std::sqrt(90.0)).epsilon(1e-12));
}

TEST_CASE("theta* agrees with the phi^4 closed form at nu = 1") {
    // mapping b1 = -b, b2 = b2
    for (double b : {0.7, 1.0, 2.5}) {
        for (double b2 : {0.5, 1.0, 3.0}) {
            const std::vector<double> coeffs = {-b, b2};
            if (2.0 * b <= 1.0) continue;
            CHECK(theta_star(coeffs, 1.0) ==
                  doctest::Approx(theta_star_phi4(1.0, b, b2, 1)).epsilon(1e-12));
        }
    }
}

TEST_CASE("phi^4 closed form values") {
    CHECK(theta_star_phi4(1.0, 1.0, 1.0, 1) == doctest::Approx(1.0 / 12.0));
    CHECK(theta_star_phi4(1.0, 1.0, 1.0, 2) == doctest::Approx(1.0 / 8.0));
    // nu -> infinity limit (2b - a)/(4 b2)
    CHECK(theta_star_phi4(1.0, 1.0, 1.0, 100000) ==
          doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("steeper wells give smaller theta*") {
    const std::vector<double> base = {-1.0, 1.0};
    const std::vector<double> steeper = {-1.0, 2.0};
    CHECK(theta_star(steeper, 1.0) < theta_star(base, 1.0));
    const std::vector<double> with_b3 = {-1.0, 1.0, 0.5};
    CHECK(theta_star(with_b3, 1.0) < theta_star(base, 1.0));
}

TEST_CASE("no double-well regime is rejected") {
    const std::vector<double> shallow = {-0.4, 1.0}; // 2 b1 = -0.8 > -a
    CHECK_THROWS_AS(theta_star(shallow, 1.0), DomainError);
    CHECK_THROWS_AS(theta_star_phi4(1.0, 0.5, 1.0, 1), DomainError);
}

TEST_CASE("profile bundles a validated root") {
    const std::vector<double> coeffs = {-2.0, 0.5, 0.25};
    const AnharmonicityProfile prof = anharmonicity_profile(coeffs, 1.0);
    CHECK(prof.theta_star > 0.0);
    const double resid = 1.0 + 2.0 * coeffs[0] + phi_series(coeffs, prof.theta_star);
    CHECK(std::abs(resid) < 1e-11);
}

TEST_CASE("phi strictly increasing in theta") {
    const std::vector<double> coeffs = {-1.0, 0.3, 0.1};
    double prev = 0.0;
    for (double theta = 0.01; theta < 3.0; theta += 0.01) {
        const double cur = phi_series(coeffs, theta);
        CHECK(cur > prev);
        prev = cur;
    }
}
