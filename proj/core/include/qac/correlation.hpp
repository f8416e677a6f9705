#pragma once

#include <span>
#include <vector>

#include "qac/lattice.hpp"
#include "qac/matsubara.hpp"

namespace qac {

/// Infrared kernel coefficient Upsilon(p) = J^_0 - J^(p) >= 0.
double upsilon(std::span<const double> p, const CouplingSpec& coupling);

/// Infinite-volume correlation upper bound
///   Y(l-l', tau-tau') = (1/(beta (2pi)^d)) sum_k Int dp
///       e^{i(p, l-l') + i k (tau-tau')} / (1/u^(k) - J^_0 + Upsilon(p)),
/// evaluated with analytic completion of the Matsubara sum beyond the table
/// and zone quadrature within `tol`. Requires a positive stability margin
/// u^(0) J^_0 < 1; otherwise throws DomainError.
double corr_bound(std::span<const int> offset, double dtau, const MatsubaraTable& u,
                  const CouplingSpec& coupling, int d, double tol);

/// Finite-box version: the zone integral is replaced by the average over the
/// conjugate torus set (p = 0 included) with torus-reduced coupling
/// quantities. Converges to corr_bound as L grows.
double finite_box_bound(std::span<const int> offset, double dtau, const MatsubaraTable& u,
                        const CouplingSpec& coupling, int d, int L);

/// Infrared-kernel coefficient
///   B_{ll'} = (2pi)^-d Int [beta nu / (2 J E(p))] cos(p, l-l') dp;
/// at offset 0 this equals beta nu J(d) / (2J). Throws DomainError for d <= 2.
double infrared_b(std::span<const int> offset, double beta, int nu, double J, int d, double tol);

/// Long-range-order sufficient condition: theta > B_00 with theta the
/// caller's Duhamel diagonal lower bound (for the phi^4 well,
/// theta = beta^2 nu theta* f(beta/(4 m theta*))).
bool lro_condition(double theta, double beta, int nu, double J, int d);

/// Duhamel diagonal lower bound beta^2 nu theta* f(beta / (4 m theta*)).
double duhamel_lower_bound(double beta, int nu, double theta_star, double m);

/// Table of Y over lattice offsets and imaginary-time separations.
struct CorrelationBoundTable {
    std::vector<std::vector<int>> offsets;
    std::vector<double> dtaus;
    std::vector<double> values; ///< row-major offsets x dtaus
    double beta = 0.0;
    int dimension = 0;
    int max_kappa = 0;  ///< Matsubara table truncation
    double tol = 0.0;

    double at(std::size_t i_offset, std::size_t i_dtau) const {
        return values[i_offset * dtaus.size() + i_dtau];
    }
};

CorrelationBoundTable corr_bound_table(const std::vector<std::vector<int>>& offsets,
                                       const std::vector<double>& dtaus, const MatsubaraTable& u,
                                       const CouplingSpec& coupling, int d, double tol);

} // namespace qac
