#include <doctest.h>

#include <cmath>
#include <vector>

#include "qac/brillouin.hpp"
#include "qac/errors.hpp"

using namespace qac;

TEST_CASE("dispersion closed values") {
    std::vector<double> p0(3, 0.0);
    CHECK(dispersion(p0) == doctest::Approx(0.0));
    std::vector<double> ppi(4, M_PI);
    CHECK(dispersion(ppi) == doctest::Approx(8.0));
    // small-p expansion E = |p|^2/2 + O(|p|^4)
    std::vector<double> ps = {1e-3, 2e-3, -1.5e-3};
    double p2 = 0.0;
    for (double x : ps) p2 += x * x;
    CHECK(dispersion(ps) == doctest::Approx(0.5 * p2).epsilon(1e-6));
}

TEST_CASE("green J(3) by two independent methods") {
    const GreenResult bessel = green_j(3, 1e-9);
    const GreenResult direct = green_j(3, 1e-8, GreenMethod::brillouin_quadrature);
    CHECK(bessel.value == doctest::Approx(0.505462).epsilon(2e-6));
    CHECK(std::abs(bessel.value - direct.value) < 1e-6);
    CHECK(bessel.abs_error_estimate <= 1e-9);
}

TEST_CASE("green dimensional bounds and monotone d J(d)") {
    double prev = 3.0 * green_j(3, 1e-10).value;
    for (int d = 4; d <= 12; ++d) {
        const double j = green_j(d, 1e-10).value;
        CHECK(j > 1.0 / (d - 0.5));
        CHECK(j < 1.0 / (d - 1.0));
        CHECK(d * j < prev);
        CHECK(d * j > 1.0);
        prev = d * j;
    }
}

TEST_CASE("green rejects d <= 2") {
    CHECK_THROWS_AS(green_j(2, 1e-8), DomainError);
    CHECK_THROWS_AS(green_j(1, 1e-8), DomainError);
}

TEST_CASE("zone integral normalization and internal consistency") {
    const double one = brillouin_integrate(3, [](std::span<const double>) { return 1.0; }, 1e-10);
    CHECK(one == doctest::Approx(1.0).epsilon(1e-10));

    const double j3 = brillouin_integrate(
        3, [](std::span<const double> p) { return 1.0 / dispersion(p); }, 1e-8);
    CHECK(j3 == doctest::Approx(green_j(3, 1e-10).value).epsilon(1e-6));
}

TEST_CASE("zone symmetry identity: integral of cos p1 / E equals J(d) - 1/d") {
    for (int d : {3, 4}) {
        const double lhs = brillouin_integrate(
            d, [](std::span<const double> p) { return std::cos(p[0]) / dispersion(p); }, 1e-8);
        const double rhs = green_j(d, 1e-10).value - 1.0 / d;
        CHECK(lhs == doctest::Approx(rhs).epsilon(2e-6));
    }
}

TEST_CASE("green_offset reproduces the symmetry identity") {
    const std::vector<int> e1 = {1, 0, 0};
    const double c = green_offset(3, e1, 1e-9);
    CHECK(c == doctest::Approx(green_j(3, 1e-10).value - 1.0 / 3.0).epsilon(1e-7));
}
