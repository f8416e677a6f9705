#pragma once

#include <vector>

#include "qac/oscillator.hpp"

namespace qac {

/// Two-point Matsubara transform u^(k) of a single oscillator at inverse
/// temperature beta, tabulated on k = 2 pi kappa / beta, kappa = -K..K.
/// Beyond the table the transform follows m k^2 + c0 with the exact
/// large-k prefactor tail_coefficient = 1/m fixed by the canonical
/// commutator.
struct MatsubaraTable {
    double beta = 0.0;
    std::vector<double> frequencies; ///< k for kappa = -K..K, ascending
    std::vector<double> values;      ///< u^(k), same order
    double tail_coefficient = 0.0;   ///< exact 1/m
    double mass = 0.0;
    double gap = 0.0;                ///< Delta of the source spectrum

    int max_kappa() const { return (static_cast<int>(frequencies.size()) - 1) / 2; }
    /// u^ at kappa (|kappa| <= max_kappa).
    double at_kappa(int kappa) const;
    /// Constant c0 of the large-k model 1/u^ ~ m k^2 + c0, matched at the
    /// top of the table.
    double inv_model_c0() const;
};

/// Spectral double sum for u^(k) with Boltzmann weights over the converged
/// window. Requires the window to cover the thermal tail,
/// exp(-beta (E_top - E_0)) < 1e-12; otherwise throws TruncationError.
MatsubaraTable matsubara_u(const SpectrumResult& spectrum, double beta, int max_kappa);

/// <q^2> at inverse temperature beta, computed two ways (spectral trace and
/// Matsubara sum with analytic tail completion) and cross-checked to 1e-6
/// relative; returns the spectral-trace value. Disagreement throws
/// ConsistencyError.
double thermal_q2(const SpectrumResult& spectrum, double beta);

} // namespace qac
