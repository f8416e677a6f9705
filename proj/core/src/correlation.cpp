#include "qac/correlation.hpp"

#include <cmath>
#include <complex>

#include "qac/brillouin.hpp"
#include "qac/errors.hpp"
#include "qac/thresholds.hpp"

namespace qac {

namespace {

// Matsubara sum at fixed p, completed analytically: the model
// 1/(m k^2 + m omega^2) is subtracted term by term inside the truncation and
// its full sum restored by the closed form
//   (1/beta) sum_k cos(k dt) / (m(k^2 + omega^2))
//     = cosh(omega (beta/2 - |dt|)) / (2 m omega sinh(omega beta / 2)).
// The residual decays like k^-6, so modest tables settle it.
struct KSum {
    const MatsubaraTable* table;
    double c0;       // large-k model constant: 1/u^ ~ m k^2 + c0
    double mass;
    double beta;
    double j0_hat;

    double closed_form(double omega2, double dtau) const {
        const double om = std::sqrt(omega2);
        const double adt = std::abs(dtau);
        const double x = 0.5 * beta * om;
        // cosh(om(beta/2 - adt)) / sinh(x), written to avoid overflow
        const double num =
            std::exp(om * (0.5 * beta - adt) - x) + std::exp(-om * (0.5 * beta - adt) - x);
        const double den = 1.0 - std::exp(-2.0 * x);
        return num / den / (2.0 * mass * om);
    }

    double at(double ups_p, double dtau) const {
        // model frequency for this p; any positive value gives an exact
        // rearrangement, this choice makes the residual smallest
        double momega2 = c0 - j0_hat + ups_p;
        if (!(momega2 > 1e-14)) momega2 = 1e-14;
        const double omega2 = momega2 / mass;

        const int kk = table->max_kappa();
        double s = 0.0;
        for (int kappa = -kk; kappa <= kk; ++kappa) {
            const double k = 2.0 * M_PI * kappa / beta;
            const double denom_true = 1.0 / table->at_kappa(kappa) - j0_hat + ups_p;
            const double denom_model = mass * (k * k + omega2);
            s += std::cos(k * dtau) * (1.0 / denom_true - 1.0 / denom_model);
        }
        return s / beta + closed_form(omega2, dtau);
    }
};

KSum make_ksum(const MatsubaraTable& u, const CouplingSpec& coupling) {
    KSum ks;
    ks.table = &u;
    ks.c0 = u.inv_model_c0();
    ks.mass = u.mass;
    ks.beta = u.beta;
    ks.j0_hat = coupling.j0_hat;
    return ks;
}

void check_margin(const MatsubaraTable& u, const CouplingSpec& coupling, const char* who) {
    const double u0 = u.at_kappa(0);
    if (!(u0 * coupling.j0_hat < 1.0))
        throw DomainError(std::string(who) + ": stability condition violated (u^(0) J^_0 >= 1)");
}

} // namespace

double upsilon(std::span<const double> p, const CouplingSpec& coupling) {
    const double v = coupling.j0_hat - coupling.at(p);
    return v;
}

double corr_bound(std::span<const int> offset, double dtau, const MatsubaraTable& u,
                  const CouplingSpec& coupling, int d, double tol) {
    if (offset.size() != static_cast<std::size_t>(d))
        throw DomainError("corr_bound: offset size must equal d");
    check_margin(u, coupling, "corr_bound");

    const KSum ks = make_ksum(u, coupling);
    std::vector<double> off(offset.begin(), offset.end());

    auto integrand = [&](std::span<const double> p) -> std::complex<double> {
        double phase = 0.0;
        for (int j = 0; j < d; ++j) phase += p[j] * off[j];
        const double ups = upsilon(p, coupling);
        const double s = ks.at(ups, dtau);
        return std::complex<double>(std::cos(phase) * s, std::sin(phase) * s);
    };
    const std::complex<double> y = brillouin_integrate_complex(d, integrand, tol);
    if (std::abs(y.imag()) > 1e-12 * std::max(1.0, std::abs(y.real())))
        throw ConsistencyError("corr_bound: imaginary part above rounding level",
                               std::abs(y.imag()));
    return y.real();
}

double finite_box_bound(std::span<const int> offset, double dtau, const MatsubaraTable& u,
                        const CouplingSpec& coupling, int d, int L) {
    if (offset.size() != static_cast<std::size_t>(d))
        throw DomainError("finite_box_bound: offset size must equal d");
    if (L < 2) throw DomainError("finite_box_bound: L must be >= 2");
    check_margin(u, coupling, "finite_box_bound");

    // Torus-reduced coupling: on the L-torus each axis contributes the
    // nearest neighbor twice for L >= 3 and once for L == 2.
    CouplingSpec torus = coupling;
    if (coupling.kind == CouplingSpec::Kind::nearest_neighbor) {
        const double per_axis = (L == 2 ? 1.0 : 2.0) * coupling.j;
        torus.j0_hat = d * per_axis;
        // J^Lambda(p) = per_axis * sum_j cos p_j, folded into Upsilon below.
        torus.kind = CouplingSpec::Kind::fourier_kernel;
        torus.kernel = [per_axis, d](std::span<const double> p) {
            double s = 0.0;
            for (int j = 0; j < d; ++j) s += std::cos(p[j]);
            return per_axis * s;
        };
    }
    const KSum ks = make_ksum(u, torus);

    // Average over the conjugate set p_j = 2 pi s_j / L mapped to (-pi, pi],
    // p = 0 included.
    long total = 1;
    for (int j = 0; j < d; ++j) total *= L;
    double sum = 0.0;
    std::vector<double> p(d);
    for (long flat = 0; flat < total; ++flat) {
        long rem = flat;
        double phase = 0.0;
        for (int j = 0; j < d; ++j) {
            int s = static_cast<int>(rem % L);
            rem /= L;
            if (s > L / 2) s -= L;
            p[j] = 2.0 * M_PI * s / L;
            phase += p[j] * offset[j];
        }
        sum += std::cos(phase) * ks.at(upsilon(p, torus), dtau);
    }
    return sum / static_cast<double>(total);
}

double infrared_b(std::span<const int> offset, double beta, int nu, double J, int d, double tol) {
    if (d <= 2) throw DomainError("infrared_b: integral diverges for d <= 2");
    if (!(J > 0.0)) throw DomainError("infrared_b: J must be positive");
    if (nu < 1) throw DomainError("infrared_b: nu must be >= 1");
    if (!(beta > 0.0)) throw DomainError("infrared_b: beta must be positive");
    return beta * nu / (2.0 * J) * green_offset(d, offset, tol * 2.0 * J / (beta * nu));
}

bool lro_condition(double theta, double beta, int nu, double J, int d) {
    if (!(theta > 0.0)) throw DomainError("lro_condition: theta must be positive");
    const std::vector<int> origin(d, 0);
    const double b00 = infrared_b(origin, beta, nu, J, d, 1e-10);
    return theta > b00;
}

double duhamel_lower_bound(double beta, int nu, double theta_star, double m) {
    return beta * beta * nu * theta_star * f_implicit(beta / (4.0 * m * theta_star));
}

CorrelationBoundTable corr_bound_table(const std::vector<std::vector<int>>& offsets,
                                       const std::vector<double>& dtaus, const MatsubaraTable& u,
                                       const CouplingSpec& coupling, int d, double tol) {
    CorrelationBoundTable t;
    t.offsets = offsets;
    t.dtaus = dtaus;
    t.beta = u.beta;
    t.dimension = d;
    t.max_kappa = u.max_kappa();
    t.tol = tol;
    t.values.reserve(offsets.size() * dtaus.size());
    for (const auto& off : offsets)
        for (double dt : dtaus)
            t.values.push_back(corr_bound(off, dt, u, coupling, d, tol));
    return t;
}

} // namespace qac
