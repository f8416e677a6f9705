#pragma once

#include <span>

namespace qac {

/// Exponentially scaled modified Bessel function e^{-t} I_0(t), t >= 0.
/// Power series below the switch point, asymptotic series above; both
/// branches are accurate to full double precision.
double bessel_i0e(double t);

/// Exponentially scaled e^{-t} I_n(t) for n = 0..nmax (t >= 0), computed by
/// backward (Miller) recurrence normalized against bessel_i0e.
/// `out` must have nmax+1 slots.
void bessel_ine(double t, int nmax, std::span<double> out);

} // namespace qac
