#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qac/oscillator.hpp"
#include "qac/stats.hpp"

namespace qac::pimc {

/// Parameters of a path-integral Monte Carlo run on the periodic box.
struct SimConfig {
    int dimension = 3;
    int box_side = 4;  ///< sites per axis (torus)
    int slices = 32;   ///< imaginary-time slices P
    double beta = 1.0;
    OscillatorSpec oscillator; ///< spin_dim = nu components, field_h supported
    double coupling_j = 0.0;   ///< nearest-neighbor intensity, periodic
    long sweeps = 1000;
    long thermalization = 100;
    int stride = 1; ///< measure every `stride` sweeps
    std::uint64_t seed = 1;
    double step_site = 0.5;
    double step_loop = 0.5;
    bool tune_steps = true; ///< adjust steps during thermalization only
    double alpha = 0.5;     ///< exponent of the scaled order parameter

    long n_sites() const;
    void validate() const;
};

/// Discretized periodic path configuration x[site][slice][component];
/// slice P wraps to slice 0.
struct LoopField {
    long n_sites = 0;
    int slices = 0;
    int comps = 0;
    std::vector<double> x;

    static LoopField zeros(const SimConfig& cfg);
    double& at(long site, int t, int c) {
        return x[(static_cast<std::size_t>(site) * slices + t) * comps + c];
    }
    double at(long site, int t, int c) const {
        return x[(static_cast<std::size_t>(site) * slices + t) * comps + c];
    }
};

/// Torus adjacency with coupling weights; on a side-2 torus the two axis
/// neighbors coincide and the pair interaction enters once.
class LatticeGeometry {
public:
    explicit LatticeGeometry(const SimConfig& cfg);
    long n_sites() const { return n_sites_; }
    /// (neighbor site, weight) pairs adjacent to `site`.
    std::span<const std::pair<long, double>> neighbors(long site) const {
        return {adj_.data() + site * stride_, static_cast<std::size_t>(stride_)};
    }
    /// Undirected edge list (a, b, weight), each edge once.
    const std::vector<std::tuple<long, long, double>>& edges() const { return edges_; }
    /// Lattice coordinates of a site.
    std::vector<int> coords(long site) const;

private:
    long n_sites_ = 0;
    int stride_ = 0;
    std::vector<std::pair<long, double>> adj_;
    std::vector<std::tuple<long, long, double>> edges_;
    int dim_ = 0, side_ = 0;
};

/// Trotter-discretized Euclidean action of the periodic Gibbs weight
/// exp(-A); the P -> inf limit recovers the continuum energy functional.
double discretized_action(const LoopField& field, const SimConfig& cfg);

/// Action change for replacing the (site, slice) value by x_new; the exact
/// quantity the Metropolis kernel exponentiates.
double action_delta_site(const LoopField& field, const SimConfig& cfg,
                         const LatticeGeometry& geo, long site, int t,
                         std::span<const double> x_new);

/// Action change for translating a whole site loop by `delta`.
double action_delta_loop(const LoopField& field, const SimConfig& cfg,
                         const LatticeGeometry& geo, long site, std::span<const double> delta);

struct SweepStats {
    double accept_site = 0.0;
    double accept_loop = 0.0;
};

/// Single Markov chain: a sweep is one Metropolis pass over every
/// (site, slice) plus one whole-loop translation proposal per site.
/// Detailed balance holds with respect to exp(-A). Deterministic for a
/// fixed (seed, chain) pair.
class Sampler {
public:
    explicit Sampler(const SimConfig& cfg, std::uint64_t chain = 0);
    SweepStats sweep();
    LoopField& field() { return field_; }
    const LoopField& field() const { return field_; }
    const LatticeGeometry& geometry() const { return geo_; }
    const SimConfig& config() const { return cfg_; }
    void set_steps(double site, double loop);
    double step_site() const { return step_site_; }
    double step_loop() const { return step_loop_; }

private:
    double uniform();
    SimConfig cfg_;
    LatticeGeometry geo_;
    LoopField field_;
    std::mt19937_64 rng_;
    double step_site_, step_loop_;
};

/// Site-and-slice average of |x|^2 for one configuration.
double obs_q2(const LoopField& field);
/// Site-and-slice average of each component.
std::vector<double> obs_polarization(const LoopField& field);

struct MomentumPoint {
    std::vector<int> s;     ///< integer momentum coordinates, p_j = 2 pi s_j / L
    double dispersion = 0;  ///< E(p)
    Estimate dhat;          ///< D^_p
    double bound = 0;       ///< beta nu / (2 J E(p)), infinity at p = 0
};
struct OffsetPoint {
    std::vector<int> offset;
    Estimate value; ///< D(offset)
};

struct SimReport {
    SimConfig config;
    double step_site_used = 0, step_loop_used = 0;
    SweepStats acceptance;
    Estimate q2;
    std::vector<Estimate> polarization;
    Estimate duhamel_diag;            ///< D(0)
    std::vector<OffsetPoint> duhamel; ///< D over all torus offsets
    std::vector<MomentumPoint> infrared;
    double parseval_lhs = 0, parseval_rhs = 0; ///< zone average of D^ vs D(0)
    Estimate order_parameter;       ///< P_Lambda
    Estimate order_parameter_alpha; ///< P^(alpha)
    Estimate fluctuation_parameter; ///< P^(0)
    int infrared_violations = 0;    ///< p != 0 with mean > bound + 3 sigma

    std::optional<double> theta_star;
    std::optional<double> duhamel_diag_lower; ///< beta^2 nu theta* f(beta/(4 m theta*))
    std::optional<double> harmonic_q2_continuum;
    std::optional<double> harmonic_q2_discrete;
    std::optional<double> corr_bound_q2;  ///< nu * Y(0,0), infinite volume
    std::optional<double> finite_box_q2;  ///< nu * finite-box Y(0,0) at this L
    std::string notes;
};

/// Thermalize, measure, and assemble the full report with analytic
/// comparisons. Deterministic for a fixed seed.
SimReport run(const SimConfig& cfg);

/// Render the report as stable, machine-parsable text (no timestamps).
std::string format_report(const SimReport& report);

/// Exact discretized and continuum references for the harmonic chain.
double harmonic_q2_discrete(double mass, double a, double beta, int slices, int nu);
double harmonic_q2_continuum(double mass, double a, double beta, int nu);
/// Exact <|x_s - x_0|^2> of the discretized free loop at slice separation s.
double harmonic_increment_discrete(double mass, double a, double beta, int slices, int nu,
                                   int slice_sep);

} // namespace qac::pimc
