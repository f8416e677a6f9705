#pragma once

#include <functional>
#include <span>

#include "qac/errors.hpp"

namespace qac {

/// Translation-invariant pair coupling, either nearest-neighbor of intensity
/// J (kernel 2J sum_j cos p_j, J^_0 = 2dJ) or a general even Fourier kernel
/// J^(p) with |J^(p)| <= J^_0.
struct CouplingSpec {
    enum class Kind { nearest_neighbor, fourier_kernel };

    Kind kind = Kind::nearest_neighbor;
    double j = 0.0; ///< nearest-neighbor intensity
    std::function<double(std::span<const double>)> kernel; ///< J^(p) for Kind::fourier_kernel
    double j0_hat = 0.0; ///< J^(0)

    static CouplingSpec nearest_neighbor(double J, int d) {
        if (!(J >= 0.0)) throw DomainError("CouplingSpec: J must be nonnegative");
        if (d < 1) throw DomainError("CouplingSpec: d must be >= 1");
        CouplingSpec c;
        c.kind = Kind::nearest_neighbor;
        c.j = J;
        c.j0_hat = 2.0 * d * J;
        return c;
    }
    static CouplingSpec fourier_kernel(std::function<double(std::span<const double>)> fn,
                                       double j0) {
        CouplingSpec c;
        c.kind = Kind::fourier_kernel;
        c.kernel = std::move(fn);
        c.j0_hat = j0;
        return c;
    }

    /// J^(p); nearest-neighbor evaluates 2J sum_j cos p_j.
    double at(std::span<const double> p) const;
};

/// Hypercubic lattice torus model: dimension, sites per axis, coupling, and
/// inverse temperature.
struct LatticeModel {
    int dimension = 3;
    int box_side = 4; ///< sites per axis; the box is a torus
    CouplingSpec coupling;
    double beta = 1.0;

    void validate() const {
        if (dimension < 1) throw DomainError("LatticeModel: dimension must be >= 1");
        if (box_side < 2) throw DomainError("LatticeModel: box_side must be >= 2");
        if (!(beta > 0.0)) throw DomainError("LatticeModel: beta must be positive");
    }
};

} // namespace qac
