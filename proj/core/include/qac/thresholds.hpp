#pragma once

#include <optional>
#include <string>

#include "qac/lattice.hpp"
#include "qac/oscillator.hpp"

namespace qac {

/// The function f: [0,inf) -> (0,1] defined implicitly by
/// f(u tanh u) = tanh(u)/u, f(0) = 1. Convex, strictly decreasing,
/// t f(t) increasing to 1; f(t) ~ 1/t to five places for t >= 6.
double f_implicit(double t);

/// 2 beta J theta* f(beta / (4 m theta*)); strictly increasing in beta with
/// limit 8 m J theta*^2.
double phi_beta(double beta, double J, double theta_star, double m);

/// Unique beta* solving phi_beta(beta*) = J(d), which exists when
/// 8 m theta*^2 J > J(d). Throws DomainError (carrying the deficit) when the
/// transition condition fails. `tol` bounds the equation residual.
double beta_star(double J, double theta_star, double m, int d, double tol);
/// Same with a precomputed lattice Green value J(d).
double beta_star_given_green(double J, double theta_star, double m, double green_value,
                             double tol);

/// High-temperature / harmonic-type uniqueness test exp(beta delta) < (a+b)/J^_0
/// for a caller-supplied decomposition of the anharmonic potential into a
/// convex part (curvature bound b >= -a) and a bounded oscillation delta >= 0.
bool high_temp_uniqueness(double a, double b_conv, double delta_osc, double j0_hat, double beta);

/// Path-regularity constant
/// D(sigma,p,nu) = 2^{3(2p+1)} (1 + 1/(sigma p))^{2p} / ((p-1-2 sigma p)(p - 2 sigma p))
///                 * 2^p Gamma(nu/2 + 1) / Gamma(nu/2),
/// for sigma in (0, 1/2) and integer p with (p-1)/(2p) > sigma.
double grr_constant(double sigma, int p, int nu);

/// Mass threshold m* = [beta / (n (c - eps)^2)] (D_V / Sigma(n;c))^{1/p}.
double grr_mass_bound(double beta, int n, double c, double eps, double sigma, int p,
                      double Sigma_nc, double D_V);

enum class Verdict { unique_all_beta, transition_above_beta_star, indeterminate };

const char* to_string(Verdict v);

/// Output of the stability / phase-transition classifier. The two sufficient
/// conditions (J^_0 < R_m for uniqueness; 8 m theta*^2 J > J(d) for a
/// transition) are mutually exclusive; parameter sets satisfying neither are
/// honestly reported indeterminate with both margins.
struct PhaseClassification {
    std::optional<double> theta_star;
    double gap = 0.0;      ///< Delta_m (scalar reference oscillator)
    double rigidity = 0.0; ///< R_m = m Delta_m^2
    double j0_hat = 0.0;
    std::optional<double> green_value;    ///< J(d), d >= 3 only
    std::optional<double> stability_lhs;  ///< compound 8 d m theta*^2 J = 4 m theta*^2 J^_0
    Verdict verdict = Verdict::indeterminate;
    std::optional<double> beta_star;
    std::optional<double> beta_star_residual;
    double stability_margin = 0.0;                  ///< R_m - J^_0
    std::optional<double> transition_margin;        ///< 8 m theta*^2 J - J(d)

    struct Notes {
        bool potential_even = false;
        bool convexity_hypothesis = false; ///< V(q) = v(q^2) with convex v
        bool nearest_neighbor = false;
        bool transition_branch_applicable = false;
        bool theta_star_defined = false;
        bool stability_condition_holds = false;
        std::string text;
    } notes;
};

struct ClassifyOptions {
    int n_levels = 12;
    double tol = 1e-9;
    double beta_star_tol = 1e-10;
    /// Override the automatically derived uniqueness-theorem hypotheses
    /// (even potential; convex v with V = v(q^2)).
    std::optional<bool> assert_even;
    std::optional<bool> assert_convex;
};

/// Classify the model: evaluate quantum rigidity against J^_0 and the
/// transition condition against the lattice Green value, filling every
/// intermediate quantity. theta* being undefined disables only the
/// transition branch.
PhaseClassification classify(const LatticeModel& model, const OscillatorSpec& spec,
                             const ClassifyOptions& opts = {});

} // namespace qac
