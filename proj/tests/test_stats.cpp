#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qac/errors.hpp"
#include "qac/stats.hpp"

using namespace qac;

TEST_CASE("blocking on independent samples reproduces the naive error") {
    oracles::TestRng rng(7);
    std::vector<double> xs(16384);
    for (double& x : xs) x = 3.0 + rng.gaussian();
    const Estimate e = blocking_estimate(xs);
    CHECK(e.mean == doctest::Approx(3.0).epsilon(0.01));
    const double naive = 1.0 / std::sqrt(16384.0);
    CHECK(e.err == doctest::Approx(naive).epsilon(0.35));
    CHECK(e.tau < 2.5);
}

TEST_CASE("blocking detects autocorrelation in an AR(1) chain") {
    oracles::TestRng rng(11);
    const double rho = 0.95; // tau_int = (1+rho)/(2(1-rho)) = 19.5
    std::vector<double> xs(65536);
    double x = 0.0;
    for (double& v : xs) {
        x = rho * x + std::sqrt(1.0 - rho * rho) * rng.gaussian();
        v = x;
    }
    const Estimate e = blocking_estimate(xs);
    const double naive = 1.0 / std::sqrt(65536.0);
    CHECK(e.err > 3.0 * naive);          // strictly bigger than the naive bar
    CHECK(e.tau > 8.0);                  // autocorrelation detected
    CHECK(e.err < 30.0 * naive);         // but not absurd
    CHECK(e.plateau_level >= 3);
}

TEST_CASE("blocking degenerate inputs") {
    std::vector<double> one = {1.5};
    const Estimate e1 = blocking_estimate(one);
    CHECK(e1.mean == doctest::Approx(1.5));
    CHECK(e1.count == 1);
    std::vector<double> constant(100, 2.0);
    const Estimate ec = blocking_estimate(constant);
    CHECK(ec.mean == doctest::Approx(2.0));
    CHECK(ec.err == doctest::Approx(0.0));
}

TEST_CASE("jackknife ratio error agrees with linear propagation") {
    oracles::TestRng rng(23);
    const std::size_t n = 8192;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = 2.0 + 0.1 * rng.gaussian();
        b[i] = 1.0 + 0.1 * rng.gaussian();
    }
    const double got = jackknife_error(a, b, [](double x, double y) { return x / y; });
    // independent numerator/denominator: var(r)/r^2 = (sa^2/a^2 + sb^2/b^2)/n
    const double expect = 2.0 * std::sqrt((0.01 / 4.0 + 0.01 / 1.0) / n);
    CHECK(got == doctest::Approx(expect).epsilon(0.1));
    CHECK_THROWS_AS(jackknife_error(std::vector<double>{1.0}, std::vector<double>{1.0},
                                    [](double x, double y) { return x / y; }),
                    DomainError);
}
