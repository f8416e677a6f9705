#pragma once

#include <cstddef>
#include <vector>

namespace qac {

/// One-site anharmonic oscillator
///   H = p^2/(2m) + (a/2) q^2 + sum_{s=1}^{r} b_s q^{2s} - h q,
/// in units hbar = k_B = 1 with m the reduced mass (physical mass over
/// hbar^2). The top coefficient b_r must be positive so the spectrum is
/// discrete. `rigidity_a` may be zero for internally rescaled specs; the
/// physical model has a > 0.
struct OscillatorSpec {
    double mass = 1.0;
    double rigidity_a = 1.0;
    std::vector<double> anharm_coeffs; ///< (b_1..b_r); empty means harmonic
    int spin_dim = 1;                  ///< nu, used by lattice-level consumers only
    double field_h = 0.0;              ///< linear tilt -h q

    int order() const { return static_cast<int>(anharm_coeffs.size()); }
    bool harmonic() const { return anharm_coeffs.empty(); }
    bool even_potential() const { return field_h == 0.0; }
    /// Full one-dimensional potential (a/2)q^2 + sum_s b_s q^{2s} - h q.
    double potential(double q) const;
    /// Throws DomainError when the spec violates its invariants.
    void validate() const;
};

/// Converged single-oscillator spectrum with position matrix elements.
struct SpectrumResult {
    OscillatorSpec spec;
    std::vector<double> energies;  ///< strictly increasing window E_0 < E_1 < ...
    std::vector<double> q_matrix;  ///< row-major n() x n(), Q_{nn'} = <psi_n|q|psi_n'>
    double gap = 0.0;              ///< Delta = min_n (E_n - E_{n-1}) over the window
    double rigidity = 0.0;         ///< R = m Delta^2
    int gap_index = 0;             ///< minimizing n: gap = E_n - E_{n-1}
    bool gap_interior = false;     ///< minimizer strictly inside the window
    int basis_size = 0;
    double convergence_estimate = 0.0;

    std::size_t n() const { return energies.size(); }
    double q(std::size_t i, std::size_t j) const { return q_matrix[i * n() + j]; }
};

/// Solve the eigenproblem in an adaptively scaled oscillator basis, doubling
/// the basis until the reported window (at least max(16, 2 n_levels) levels)
/// is stable to `tol` relative. Throws DomainError for non-confining
/// coefficients and ConvergenceError when the basis budget is exhausted.
SpectrumResult solve_spectrum(const OscillatorSpec& spec, int n_levels, double tol);

/// Leading-order quasi-classical level of the even polynomial well,
///   E_n ~ [b_r/(2m)^r]^{1/(r+1)}
///         [pi r Gamma(3/2 + 1/2r) / (Gamma(3/2) Gamma(1/2r)) (n + 1/2)]^{2r/(r+1)}.
double wkb_eigenvalue(const OscillatorSpec& spec, int n);

/// Unitary mass rescaling: H_m is equivalent to rho^{-r} T(rho) with
/// rho = (m/m0)^{1/(r+1)} and T(rho) an oscillator of mass m0 whose
/// quadratic term absorbs a/2. Callers verify gap(spec) = rho^{-r} gap(spec').
struct ScaledSpec {
    double rho = 1.0;
    OscillatorSpec spec;
};
ScaledSpec scaled_spec(const OscillatorSpec& spec, double m0);

} // namespace qac
