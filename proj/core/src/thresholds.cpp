#include "qac/thresholds.hpp"

#include <cmath>

#include "qac/anharmonicity.hpp"
#include "qac/brillouin.hpp"
#include "qac/errors.hpp"

namespace qac {

double CouplingSpec::at(std::span<const double> p) const {
    if (kind == Kind::nearest_neighbor) {
        double s = 0.0;
        for (double pj : p) s += std::cos(pj);
        return 2.0 * j * s;
    }
    if (!kernel) throw DomainError("CouplingSpec: fourier kernel not set");
    return kernel(p);
}

double f_implicit(double t) {
    if (t < 0.0) throw DomainError("f_implicit: t must be nonnegative");
    if (t == 0.0) return 1.0;

    // Solve g(u) = u tanh u - t = 0; g is strictly increasing on u > 0.
    double lo = 0.0;
    double hi = std::max(1.0, t + 1.0);
    while (hi * std::tanh(hi) < t) hi *= 2.0;
    double u = std::min(hi, std::max(std::sqrt(t), t));
    for (int it = 0; it < 200; ++it) {
        const double th = std::tanh(u);
        const double g = u * th - t;
        (g < 0.0 ? lo : hi) = u;
        const double sech2 = 1.0 - th * th;
        const double dg = th + u * sech2;
        double next = u - g / dg;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - u) <= 1e-15 * u) {
            u = next;
            break;
        }
        u = next;
    }
    return std::tanh(u) / u;
}

double phi_beta(double beta, double J, double theta_star, double m) {
    if (!(beta > 0.0) || !(J > 0.0) || !(theta_star > 0.0) || !(m > 0.0))
        throw DomainError("phi_beta: all arguments must be positive");
    return 2.0 * beta * J * theta_star * f_implicit(beta / (4.0 * m * theta_star));
}

double beta_star_given_green(double J, double theta_star, double m, double green_value,
                             double tol) {
    if (!(tol > 0.0)) throw DomainError("beta_star: tol must be positive");
    const double limit = 8.0 * m * theta_star * theta_star * J;
    if (!(limit > green_value)) {
        throw DomainError("beta_star: no transition threshold, 8 m theta*^2 J - J(d) = " +
                          std::to_string(limit - green_value));
    }
    double lo = 1e-10, hi = 1.0;
    while (phi_beta(hi, J, theta_star, m) < green_value) {
        hi *= 2.0;
        if (hi > 1e300) throw ConvergenceError("beta_star: bracket expansion failed", hi);
    }
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        (phi_beta(mid, J, theta_star, m) < green_value ? lo : hi) = mid;
        if (hi - lo <= 1e-15 * hi) break;
    }
    const double bs = 0.5 * (lo + hi);
    const double resid = std::abs(phi_beta(bs, J, theta_star, m) - green_value);
    if (resid > tol) throw AccuracyError("beta_star: residual above tolerance", resid);
    return bs;
}

double beta_star(double J, double theta_star, double m, int d, double tol) {
    return beta_star_given_green(J, theta_star, m, green_j(d, 1e-12).value, tol);
}

bool high_temp_uniqueness(double a, double b_conv, double delta_osc, double j0_hat, double beta) {
    if (!(a + b_conv > 0.0))
        throw DomainError("high_temp_uniqueness: a + b must be positive");
    if (!(j0_hat > 0.0)) throw DomainError("high_temp_uniqueness: J^_0 must be positive");
    if (delta_osc < 0.0) throw DomainError("high_temp_uniqueness: delta must be >= 0");
    if (!(beta > 0.0)) throw DomainError("high_temp_uniqueness: beta must be positive");
    return std::exp(beta * delta_osc) < (a + b_conv) / j0_hat;
}

double grr_constant(double sigma, int p, int nu) {
    if (!(sigma > 0.0 && sigma < 0.5)) throw DomainError("grr_constant: sigma must be in (0, 1/2)");
    if (p < 1) throw DomainError("grr_constant: p must be a positive integer");
    if (nu < 1) throw DomainError("grr_constant: nu must be >= 1");
    const double d1 = p - 1.0 - 2.0 * sigma * p;
    const double d2 = p - 2.0 * sigma * p;
    if (!(d1 > 0.0)) throw DomainError("grr_constant: requires (p-1)/(2p) > sigma");
    const double front = std::pow(2.0, 3.0 * (2.0 * p + 1.0)) *
                         std::pow(1.0 + 1.0 / (sigma * p), 2.0 * p) / (d1 * d2);
    const double gammas =
        std::pow(2.0, p) * std::tgamma(0.5 * nu + 1.0) / std::tgamma(0.5 * nu);
    return front * gammas;
}

double grr_mass_bound(double beta, int n, double c, double eps, double sigma, int p,
                      double Sigma_nc, double D_V) {
    if (!(beta > 0.0)) throw DomainError("grr_mass_bound: beta must be positive");
    if (n < 2) throw DomainError("grr_mass_bound: n must be >= 2");
    if (!(eps > 0.0 && eps < c)) throw DomainError("grr_mass_bound: need 0 < eps < c");
    if (!(Sigma_nc > 0.0 && Sigma_nc <= 1.0))
        throw DomainError("grr_mass_bound: Sigma(n;c) must lie in (0, 1]");
    if (!(D_V > 0.0)) throw DomainError("grr_mass_bound: D_V must be positive");
    if (!(sigma > 0.0 && sigma < 0.5) || p < 1)
        throw DomainError("grr_mass_bound: bad (sigma, p)");
    const double diff = c - eps;
    return beta / (n * diff * diff) * std::pow(D_V / Sigma_nc, 1.0 / p);
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::unique_all_beta: return "unique_all_beta";
        case Verdict::transition_above_beta_star: return "transition_above_beta_star";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

PhaseClassification classify(const LatticeModel& model, const OscillatorSpec& spec,
                             const ClassifyOptions& opts) {
    model.validate();
    spec.validate();

    PhaseClassification out;
    out.j0_hat = model.coupling.j0_hat;

    // Hypotheses of the uniqueness theorem for this polynomial model class:
    // evenness holds at h = 0; V(q) = v(q^2) with convex v holds when all
    // b_s, s >= 2, are nonnegative.
    bool even = spec.even_potential();
    bool convex = true;
    for (int s = 2; s <= spec.order(); ++s)
        if (spec.anharm_coeffs[s - 1] < 0.0) convex = false;
    if (opts.assert_even) even = *opts.assert_even;
    if (opts.assert_convex) convex = *opts.assert_convex;
    out.notes.potential_even = even;
    out.notes.convexity_hypothesis = convex;
    out.notes.nearest_neighbor = model.coupling.kind == CouplingSpec::Kind::nearest_neighbor;

    // Gap of the scalar reference oscillator (vector models inherit it).
    if (spec.harmonic()) {
        out.gap = std::sqrt(spec.rigidity_a / spec.mass);
        out.rigidity = spec.rigidity_a;
    } else {
        const SpectrumResult sp = solve_spectrum(spec, opts.n_levels, opts.tol);
        out.gap = sp.gap;
        out.rigidity = sp.rigidity;
    }
    out.stability_margin = out.rigidity - out.j0_hat;
    out.notes.stability_condition_holds = out.stability_margin > 0.0;

    // theta* (double-well regime only).
    if (!spec.harmonic() && spec.even_potential()) {
        try {
            out.theta_star = theta_star(spec.anharm_coeffs, spec.rigidity_a);
        } catch (const DomainError&) {
            out.theta_star.reset();
        }
    }
    out.notes.theta_star_defined = out.theta_star.has_value();
    if (out.theta_star)
        out.stability_lhs = 4.0 * spec.mass * (*out.theta_star) * (*out.theta_star) * out.j0_hat;

    // Transition branch: proven for nearest-neighbor coupling, d >= 3, with
    // a defined theta*.
    const bool transition_applicable = out.notes.nearest_neighbor && model.dimension >= 3 &&
                                       out.theta_star.has_value() && model.coupling.j > 0.0;
    out.notes.transition_branch_applicable = transition_applicable;
    if (model.dimension >= 3) out.green_value = green_j(model.dimension, 1e-12).value;

    bool transition = false;
    if (transition_applicable) {
        const double lhs =
            8.0 * spec.mass * (*out.theta_star) * (*out.theta_star) * model.coupling.j;
        out.transition_margin = lhs - *out.green_value;
        transition = *out.transition_margin > 0.0;
        if (transition) {
            out.beta_star = beta_star_given_green(model.coupling.j, *out.theta_star, spec.mass,
                                                  *out.green_value, opts.beta_star_tol);
            out.beta_star_residual =
                std::abs(phi_beta(*out.beta_star, model.coupling.j, *out.theta_star, spec.mass) -
                         *out.green_value);
        }
    }

    const bool stable = out.notes.stability_condition_holds && even && convex;
    if (stable && transition)
        throw ConsistencyError(
            "classify: stability and transition conditions held simultaneously",
            out.stability_margin);

    if (stable) {
        out.verdict = Verdict::unique_all_beta;
    } else if (transition) {
        out.verdict = Verdict::transition_above_beta_star;
    } else {
        out.verdict = Verdict::indeterminate;
        if (out.notes.stability_condition_holds && (!even || !convex))
            out.notes.text =
                "stability condition holds, uniqueness theorem hypotheses unverified";
    }
    return out;
}

} // namespace qac
