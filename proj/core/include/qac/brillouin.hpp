#pragma once

#include <complex>
#include <functional>
#include <span>

namespace qac {

/// Lattice dispersion E(p) = sum_j (1 - cos p_j), p in (-pi, pi]^d.
double dispersion(std::span<const double> p);

enum class GreenMethod { laplace_bessel, brillouin_quadrature };

struct GreenResult {
    int dimension = 0;
    double value = 0.0;
    double abs_error_estimate = 0.0;
    GreenMethod method = GreenMethod::laplace_bessel;
};

/// Lattice Green's function J(d) = (2pi)^-d Int dp / E(p) over the zone.
/// Primary route is the one-dimensional Laplace transform
///   J(d) = Int_0^inf [e^-t I_0(t)]^d dt;
/// the direct zone quadrature is retained as an oracle for d <= 4.
/// Throws DomainError for d <= 2 (the integral diverges).
GreenResult green_j(int d, double tol, GreenMethod method = GreenMethod::laplace_bessel);

/// Off-origin Green value (2pi)^-d Int cos(p, offset) / E(p) dp via the
/// factorized Laplace-Bessel representation Int e^{-dt} prod_j I_{n_j}(t) dt.
double green_offset(int d, std::span<const int> offset, double tol);

/// (2pi)^-d normalized integral of `f` over the Brillouin zone (-pi, pi]^d.
/// Handles integrands with at worst a 1/|p|^2 singularity at the origin
/// (d >= 3) by a radial face-pyramid decomposition; node counts double
/// until the result is stable within tol.
double brillouin_integrate(int d, const std::function<double(std::span<const double>)>& f,
                           double tol);

/// Complex-valued variant; the imaginary part survives only through rounding
/// for integrands with even real symmetry, which callers may assert.
std::complex<double> brillouin_integrate_complex(
    int d, const std::function<std::complex<double>(std::span<const double>)>& f, double tol);

} // namespace qac
