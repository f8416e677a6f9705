#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qac/errors.hpp"
#include "qac/pimc.hpp"

using namespace qac;
using namespace qac::pimc;

namespace {

SimConfig base_config() {
    SimConfig c;
    c.dimension = 1;
    c.box_side = 2;
    c.slices = 16;
    c.beta = 2.0;
    c.oscillator.mass = 1.0;
    c.oscillator.rigidity_a = 1.0;
    c.coupling_j = 0.0;
    c.sweeps = 40000;
    c.thermalization = 2000;
    c.stride = 2;
    c.seed = 42;
    return c;
}

SimConfig dw_config() {
    SimConfig c = base_config();
    c.oscillator.anharm_coeffs = {-1.0, 1.0};
    return c;
}

} // namespace

TEST_CASE("action closed cases") {
    SimConfig c = base_config();
    LoopField f = LoopField::zeros(c);
    SUBCASE("zero field has zero action when V(0) = 0 and h = 0") {
        CHECK(discretized_action(f, c) == doctest::Approx(0.0));
    }
    SUBCASE("one constant loop in the harmonic well: A = beta (a/2) x^2") {
        const double x = 1.7;
        for (int t = 0; t < c.slices; ++t) f.at(0, t, 0) = x;
        CHECK(discretized_action(f, c) ==
              doctest::Approx(c.beta * 0.5 * c.oscillator.rigidity_a * x * x).epsilon(1e-12));
    }
    SUBCASE("cyclic slice translation leaves the action invariant") {
        oracles::TestRng rng(3);
        SimConfig cj = dw_config();
        cj.coupling_j = 0.4;
        LoopField g = LoopField::zeros(cj);
        for (double& v : g.x) v = 2.0 * rng.uniform() - 1.0;
        const double a0 = discretized_action(g, cj);
        LoopField rot = g;
        for (long s = 0; s < g.n_sites; ++s)
            for (int t = 0; t < g.slices; ++t)
                rot.at(s, t, 0) = g.at(s, (t + 1) % g.slices, 0);
        CHECK(discretized_action(rot, cj) == doctest::Approx(a0).epsilon(1e-12));
    }
}

TEST_CASE("local action deltas equal global differences") {
    SimConfig c = dw_config();
    c.coupling_j = 0.35;
    c.dimension = 2;
    c.box_side = 3;
    c.slices = 8;
    c.oscillator.spin_dim = 2;
    const LatticeGeometry geo(c);
    oracles::TestRng rng(17);
    LoopField f = LoopField::zeros(c);
    for (double& v : f.x) v = 2.0 * rng.uniform() - 1.0;

    for (int trial = 0; trial < 24; ++trial) {
        const long site = static_cast<long>(rng.uniform() * f.n_sites);
        const int t = static_cast<int>(rng.uniform() * c.slices);
        std::vector<double> prop = {f.at(site, t, 0) + rng.uniform() - 0.5,
                                    f.at(site, t, 1) + rng.uniform() - 0.5};
        const double da = action_delta_site(f, c, geo, site, t, prop);
        LoopField g = f;
        g.at(site, t, 0) = prop[0];
        g.at(site, t, 1) = prop[1];
        const double global = discretized_action(g, c) - discretized_action(f, c);
        CHECK(da == doctest::Approx(global).epsilon(1e-9));
    }
    for (int trial = 0; trial < 8; ++trial) {
        const long site = static_cast<long>(rng.uniform() * f.n_sites);
        std::vector<double> delta = {rng.uniform() - 0.5, rng.uniform() - 0.5};
        const double da = action_delta_loop(f, c, geo, site, delta);
        LoopField g = f;
        for (int t = 0; t < c.slices; ++t) {
            g.at(site, t, 0) += delta[0];
            g.at(site, t, 1) += delta[1];
        }
        const double global = discretized_action(g, c) - discretized_action(f, c);
        CHECK(da == doctest::Approx(global).epsilon(1e-9));
    }
}

// Brute-force stationarity of the Metropolis kernel on a two-slice loop:
// the exact target on a grid must be a fixed point of the (numerically
// integrated) transition operator built from the production action.
TEST_CASE("transition-kernel stationarity against grid integration") {
    SimConfig c;
    c.dimension = 1;
    c.box_side = 2;
    c.slices = 2; // below the production minimum by design: oracle geometry
    c.beta = 1.2;
    c.oscillator.anharm_coeffs = {-1.0, 1.0};
    c.coupling_j = 0.0;

    const int n = 281;
    const double xmax = 3.5;
    const double h = 2.0 * xmax / (n - 1);
    const double step = 0.5;
    const int reach = static_cast<int>(std::round(step / h));
    REQUIRE(std::abs(reach * h - step) < 1e-12);

    // Negative log-weight of one site's two slices via the production action.
    std::vector<double> act(static_cast<std::size_t>(n) * n);
    {
        LoopField f = LoopField::zeros(c);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                f.at(0, 0, 0) = -xmax + h * i;
                f.at(0, 1, 0) = -xmax + h * j;
                act[static_cast<std::size_t>(i) * n + j] = discretized_action(f, c);
            }
    }
    std::vector<double> pi(act.size());
    double z = 0.0;
    for (std::size_t idx = 0; idx < act.size(); ++idx) {
        pi[idx] = std::exp(-act[idx]);
        z += pi[idx];
    }
    for (double& v : pi) v /= z;

    auto accept = [&](std::size_t from, std::size_t to) {
        const double da = act[to] - act[from];
        return da <= 0.0 ? 1.0 : std::exp(-da);
    };
    const double pw = h / (2.0 * step); // proposal density x grid weight

    // slice-0 update, slice-1 update, then the loop translation
    std::vector<double> rho = pi, next(pi.size());
    for (int stage = 0; stage < 3; ++stage) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const std::size_t from = static_cast<std::size_t>(i) * n + j;
                double stay = 1.0;
                for (int dk = -reach; dk <= reach; ++dk) {
                    if (dk == 0) continue;
                    int i2 = i, j2 = j;
                    if (stage == 0) i2 = i + dk;
                    if (stage == 1) j2 = j + dk;
                    if (stage == 2) {
                        i2 = i + dk;
                        j2 = j + dk;
                    }
                    if (i2 < 0 || i2 >= n || j2 < 0 || j2 >= n) continue; // outside: reject
                    const std::size_t to = static_cast<std::size_t>(i2) * n + j2;
                    const double k = pw * accept(from, to);
                    next[to] += rho[from] * k;
                    stay -= k;
                }
                next[from] += rho[from] * stay;
            }
        }
        rho.swap(next);
    }
    double max_dev = 0.0, max_pi = 0.0;
    for (std::size_t idx = 0; idx < pi.size(); ++idx) {
        max_dev = std::max(max_dev, std::abs(rho[idx] - pi[idx]));
        max_pi = std::max(max_pi, pi[idx]);
    }
    CHECK(max_dev / max_pi < 2e-3);
}

TEST_CASE("harmonic sampler matches the exact discretized covariance") {
    SimConfig c = base_config();
    const SimReport r = run(c);
    const double exact = harmonic_q2_discrete(1.0, 1.0, c.beta, c.slices, 1);
    CHECK(std::abs(r.q2.mean - exact) < 3.0 * r.q2.err);
    CHECK(r.q2.err < 0.02);
    REQUIRE(r.harmonic_q2_discrete.has_value());
    CHECK(*r.harmonic_q2_discrete == doctest::Approx(exact));
}

TEST_CASE("free-measure increments: exact discrete value and the moment bound") {
    SimConfig c = base_config();
    c.sweeps = 30000;
    Sampler sampler(c);
    for (long i = 0; i < c.thermalization; ++i) sampler.sweep();
    const int P = c.slices;
    std::vector<std::vector<double>> series(P / 2 + 1);
    for (long i = 0; i < c.sweeps; ++i) {
        sampler.sweep();
        if (i % 4) continue;
        const LoopField& f = sampler.field();
        for (int sep = 1; sep <= P / 2; ++sep) {
            double acc = 0.0;
            for (long s = 0; s < f.n_sites; ++s)
                for (int t = 0; t < P; ++t) {
                    const double d = f.at(s, (t + sep) % P, 0) - f.at(s, t, 0);
                    acc += d * d;
                }
            series[sep].push_back(acc / (f.n_sites * P));
        }
    }
    for (int sep = 1; sep <= P / 2; ++sep) {
        const Estimate e = blocking_estimate(series[sep]);
        const double exact = harmonic_increment_discrete(1.0, 1.0, c.beta, P, 1, sep);
        CHECK(std::abs(e.mean - exact) < 3.0 * e.err);
        // p = 1 moment bound of the free loop measure: (nu/m) |tau - tau'|_beta
        const double taudist = std::min(sep, P - sep) * c.beta / P;
        CHECK(e.mean < taudist / 1.0 + 3.0 * e.err);
    }
}

TEST_CASE("deterministic Trotter error of the discretized harmonic loop is 1/P^2") {
    const double cont = harmonic_q2_continuum(1.0, 1.0, 2.0, 1);
    double prev_err = 0.0;
    for (int P : {8, 16, 32, 64}) {
        const double err = std::abs(harmonic_q2_discrete(1.0, 1.0, 2.0, P, 1) - cont);
        if (prev_err > 0.0) {
            const double ratio = prev_err / err;
            CHECK(ratio > 3.5);
            CHECK(ratio < 4.5);
        }
        prev_err = err;
    }
}

TEST_CASE("imaginary-time shift invariance of correlators") {
    SimConfig c = base_config();
    c.sweeps = 24000;
    Sampler sampler(c);
    for (long i = 0; i < c.thermalization; ++i) sampler.sweep();
    const int P = c.slices, sep = 3;
    std::vector<double> diff;
    for (long i = 0; i < c.sweeps; ++i) {
        sampler.sweep();
        if (i % 4) continue;
        const LoopField& f = sampler.field();
        double c0 = 0.0, c8 = 0.0;
        for (long s = 0; s < f.n_sites; ++s) {
            c0 += f.at(s, 0, 0) * f.at(s, sep, 0);
            c8 += f.at(s, 8, 0) * f.at(s, (8 + sep) % P, 0);
        }
        diff.push_back((c0 - c8) / f.n_sites);
    }
    const Estimate e = blocking_estimate(diff);
    CHECK(std::abs(e.mean) < 3.0 * e.err);
}

TEST_CASE("polarization: symmetric well centered, tilted well matches the spectral trace") {
    SUBCASE("symmetric") {
        SimConfig c = dw_config();
        c.sweeps = 30000;
        const SimReport r = run(c);
        CHECK(std::abs(r.polarization[0].mean) < 3.0 * r.polarization[0].err);
    }
    SUBCASE("tilted") {
        SimConfig c = dw_config();
        c.slices = 64;
        c.sweeps = 60000;
        c.oscillator.field_h = 0.8;
        const SimReport r = run(c);
        // spectral-trace oracle <q> = sum_n w_n Q_nn / Z at J = 0
        const SpectrumResult sp = solve_spectrum(c.oscillator, 16, 1e-10);
        double z = 0.0, q = 0.0;
        for (std::size_t a = 0; a < sp.n(); ++a) {
            const double w = std::exp(-c.beta * (sp.energies[a] - sp.energies[0]));
            z += w;
            q += w * sp.q(a, a);
        }
        const double expect = q / z;
        CHECK(expect > 0.1);
        CHECK(r.polarization[0].mean > 3.0 * r.polarization[0].err); // M > 0 at 3 sigma
        CHECK(std::abs(r.polarization[0].mean - expect) <
              3.0 * r.polarization[0].err + 0.01 * std::abs(expect));
    }
}

TEST_CASE("uncoupled sites: off-diagonal Duhamel vanishes, Parseval holds exactly") {
    SimConfig c = dw_config();
    c.dimension = 2;
    c.box_side = 3;
    c.slices = 8;
    c.sweeps = 20000;
    const SimReport r = run(c);
    for (const OffsetPoint& op : r.duhamel) {
        bool origin = true;
        for (int x : op.offset) origin = origin && x == 0;
        if (origin) continue;
        CHECK(std::abs(op.value.mean) < 3.5 * op.value.err);
    }
    CHECK(r.parseval_lhs == doctest::Approx(r.parseval_rhs).epsilon(1e-12));
    CHECK(r.infrared_violations == 0);
    for (const MomentumPoint& mp : r.infrared) CHECK(mp.dhat.mean >= 0.0);
}

TEST_CASE("fixed seed reproduces the report bit for bit") {
    SimConfig c = dw_config();
    c.sweeps = 3000;
    c.thermalization = 300;
    const std::string r1 = format_report(run(c));
    const std::string r2 = format_report(run(c));
    CHECK(r1 == r2);
    c.seed = 43;
    CHECK(format_report(run(c)) != r1);
}

TEST_CASE("order parameter shrinks with volume for uncoupled sites") {
    double prev = 1e300;
    for (int L : {2, 3, 4}) {
        SimConfig c = dw_config();
        c.dimension = 3;
        c.box_side = L;
        c.slices = 8;
        c.beta = 1.0;
        c.sweeps = 12000;
        c.thermalization = 1000;
        const SimReport r = run(c);
        CHECK(r.order_parameter.mean < prev);
        prev = r.order_parameter.mean;
    }
}

TEST_CASE("config validation") {
    SimConfig c = base_config();
    c.slices = 4;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = base_config();
    c.box_side = 1;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = base_config();
    c.stride = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
}
