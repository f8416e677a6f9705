#include "qac/matsubara.hpp"

#include <cmath>
#include <vector>

#include "qac/errors.hpp"

namespace qac {

namespace {

constexpr double kWindowTail = 1e-12;

struct SpectralPairs {
    // u^(k) = sum_i c_i de_i / (k^2 + de_i^2) + [k == 0] * static_part
    std::vector<double> de;
    std::vector<double> c;
    double static_part = 0.0; // beta-weighted diagonal term, nonzero only when tilted
};

SpectralPairs build_pairs(const SpectrumResult& sp, double beta) {
    const std::size_t n = sp.n();
    const double e0 = sp.energies[0];
    double z = 0.0;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::exp(-beta * (sp.energies[i] - e0));
        z += w[i];
    }
    SpectralPairs pairs;
    pairs.de.reserve(n * (n - 1) / 2);
    pairs.c.reserve(n * (n - 1) / 2);
    for (std::size_t a = 0; a < n; ++a) {
        pairs.static_part += beta * w[a] * sp.q(a, a) * sp.q(a, a) / z;
        for (std::size_t b = a + 1; b < n; ++b) {
            const double de = sp.energies[b] - sp.energies[a];
            const double c = 2.0 * sp.q(a, b) * sp.q(a, b) * (w[a] - w[b]) / z;
            if (c == 0.0) continue;
            pairs.de.push_back(de);
            pairs.c.push_back(c);
        }
    }
    return pairs;
}

double eval_u(const SpectralPairs& pairs, double k) {
    double u = 0.0;
    for (std::size_t i = 0; i < pairs.de.size(); ++i)
        u += pairs.c[i] * pairs.de[i] / (k * k + pairs.de[i] * pairs.de[i]);
    if (k == 0.0) u += pairs.static_part;
    return u;
}

void require_window(const SpectrumResult& sp, double beta, const char* who) {
    if (!(beta > 0.0)) throw DomainError(std::string(who) + ": beta must be positive");
    const double span = sp.energies.back() - sp.energies.front();
    if (std::exp(-beta * span) >= kWindowTail)
        throw TruncationError(std::string(who) +
                              ": spectral window too small for the Boltzmann tail at this beta");
}

// (1/beta) sum_{kappa in Z} 1/(m k^2 + m omega^2) = coth(beta omega / 2) / (2 m omega)
double coth_sum(double mass, double omega, double beta) {
    return 1.0 / std::tanh(0.5 * beta * omega) / (2.0 * mass * omega);
}

} // namespace

double MatsubaraTable::at_kappa(int kappa) const {
    const int k = max_kappa();
    if (kappa < -k || kappa > k) throw DomainError("MatsubaraTable: kappa outside table");
    return values[static_cast<std::size_t>(kappa + k)];
}

double MatsubaraTable::inv_model_c0() const {
    const int k = max_kappa();
    const double ktop = frequencies.back();
    const double utop = values[static_cast<std::size_t>(2 * k)];
    return 1.0 / utop - mass * ktop * ktop;
}

MatsubaraTable matsubara_u(const SpectrumResult& spectrum, double beta, int max_kappa) {
    require_window(spectrum, beta, "matsubara_u");
    if (max_kappa < 0) throw DomainError("matsubara_u: max_kappa must be >= 0");

    const SpectralPairs pairs = build_pairs(spectrum, beta);
    MatsubaraTable t;
    t.beta = beta;
    t.mass = spectrum.spec.mass;
    t.gap = spectrum.gap;
    t.tail_coefficient = 1.0 / spectrum.spec.mass;
    t.frequencies.resize(2 * max_kappa + 1);
    t.values.resize(2 * max_kappa + 1);
    for (int kappa = 0; kappa <= max_kappa; ++kappa) {
        const double k = 2.0 * M_PI * kappa / beta;
        const double u = eval_u(pairs, k);
        t.frequencies[max_kappa + kappa] = k;
        t.frequencies[max_kappa - kappa] = -k;
        t.values[max_kappa + kappa] = u;
        t.values[max_kappa - kappa] = u;
    }
    return t;
}

double thermal_q2(const SpectrumResult& spectrum, double beta) {
    require_window(spectrum, beta, "thermal_q2");

    // (i) spectral trace of q^2 over the window
    const std::size_t n = spectrum.n();
    const double e0 = spectrum.energies[0];
    double z = 0.0, trace = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        const double w = std::exp(-beta * (spectrum.energies[a] - e0));
        double q2aa = 0.0;
        for (std::size_t b = 0; b < n; ++b) q2aa += spectrum.q(a, b) * spectrum.q(a, b);
        z += w;
        trace += w * q2aa;
    }
    const double way_spectral = trace / z;

    // (ii) Matsubara sum with the exact coth completion of the
    // m(k^2 + Delta^2) model beyond the truncation.
    const SpectralPairs pairs = build_pairs(spectrum, beta);
    const double mass = spectrum.spec.mass;
    const double delta = spectrum.gap;
    double way_matsubara = 0.0;
    double prev = 0.0;
    for (int kmax = 64;; kmax *= 2) {
        double partial = 0.0;
        for (int kappa = -kmax; kappa <= kmax; ++kappa) {
            const double k = 2.0 * M_PI * kappa / beta;
            partial += eval_u(pairs, k) - 1.0 / (mass * (k * k + delta * delta));
        }
        way_matsubara = partial / beta + coth_sum(mass, delta, beta);
        if (kmax > 64 && std::abs(way_matsubara - prev) <= 1e-9 * std::abs(way_matsubara)) break;
        prev = way_matsubara;
        if (kmax > (1 << 22))
            throw ConvergenceError("thermal_q2: Matsubara sum did not settle",
                                   std::abs(way_matsubara - prev));
    }

    const double rel = std::abs(way_spectral - way_matsubara) / std::abs(way_spectral);
    if (rel > 1e-6)
        throw ConsistencyError("thermal_q2: spectral trace and Matsubara sum disagree", rel);
    return way_spectral;
}

} // namespace qac
