#include "qac/oscillator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "qac/errors.hpp"

namespace qac {

namespace {

// Symmetric banded matrix: bands[j][i] holds element (i, i+j), j = 0..bw.
struct SymBanded {
    int n = 0;
    std::vector<std::vector<double>> bands;

    SymBanded(int n, int bw) : n(n), bands(bw + 1) {
        for (int j = 0; j <= bw; ++j) bands[j].assign(n - j > 0 ? n - j : 0, 0.0);
    }
    int bandwidth() const { return static_cast<int>(bands.size()) - 1; }
    double get(int i, int k) const {
        const int j = std::abs(i - k);
        if (j > bandwidth()) return 0.0;
        return bands[j][std::min(i, k)];
    }
};

// C = X * A where X is the symmetric tridiagonal position operator in the
// scaled oscillator basis: X_{i,i+1} = ell sqrt((i+1)/2), X_ii = 0.
SymBanded apply_position(const SymBanded& a, double ell) {
    const int n = a.n;
    SymBanded c(n, a.bandwidth() + 1);
    auto off = [&](int i) { return ell * std::sqrt(0.5 * (i + 1)); };
    for (int i = 0; i < n; ++i) {
        for (int k = i; k <= std::min(n - 1, i + c.bandwidth()); ++k) {
            double v = 0.0;
            if (i > 0) v += off(i - 1) * a.get(i - 1, k);
            if (i + 1 < n) v += off(i) * a.get(i + 1, k);
            c.bands[k - i][i] = v;
        }
    }
    return c;
}

// Coefficients of U(q_c + x) in x given coefficients of U in q.
std::vector<double> taylor_shift(const std::vector<double>& u, double qc) {
    const int deg = static_cast<int>(u.size()) - 1;
    std::vector<double> v(u.size(), 0.0);
    for (int i = 0; i <= deg; ++i) {
        double binom = 1.0; // C(i, j) q_c^{i-j}, built up over j
        double pow_qc = std::pow(qc, i);
        for (int j = 0; j <= i; ++j) {
            v[j] += u[i] * binom * pow_qc;
            if (j < i) {
                binom *= static_cast<double>(i - j) / (j + 1);
                pow_qc = (qc == 0.0) ? (i - j - 1 == 0 ? 1.0 : 0.0) : pow_qc / qc;
            }
        }
    }
    return v;
}

std::vector<double> potential_poly(const OscillatorSpec& s) {
    const int r = s.order();
    std::vector<double> u(2 * std::max(r, 1) + 1, 0.0);
    u[1] = -s.field_h;
    u[2] = 0.5 * s.rigidity_a;
    for (int sdx = 1; sdx <= r; ++sdx) u[2 * sdx] += s.anharm_coeffs[sdx - 1];
    return u;
}

double poly_eval(const std::vector<double>& u, double q) {
    double v = 0.0;
    for (int j = static_cast<int>(u.size()) - 1; j >= 0; --j) v = v * q + u[j];
    return v;
}

// Global minimum of the confining polynomial, for basis centering.
double potential_minimum(const std::vector<double>& u) {
    double best_q = 0.0, best_v = poly_eval(u, 0.0);
    // coarse scan on a generous window, then Newton polish
    double scale = 1.0;
    for (std::size_t j = 1; j < u.size(); ++j)
        if (u[j] != 0.0) scale = std::max(scale, std::pow(std::abs(u[j]), -1.0 / j));
    const double window = 8.0 * scale;
    for (int i = -400; i <= 400; ++i) {
        const double q = window * i / 400.0;
        const double v = poly_eval(u, q);
        if (v < best_v) {
            best_v = v;
            best_q = q;
        }
    }
    std::vector<double> du(u.size() > 1 ? u.size() - 1 : 0);
    for (std::size_t j = 1; j < u.size(); ++j) du[j - 1] = u[j] * j;
    std::vector<double> ddu(du.size() > 1 ? du.size() - 1 : 0);
    for (std::size_t j = 1; j < du.size(); ++j) ddu[j - 1] = du[j] * j;
    double q = best_q;
    for (int it = 0; it < 60; ++it) {
        const double g = poly_eval(du, q), h = poly_eval(ddu, q);
        if (h <= 0.0 || !std::isfinite(g / h)) break;
        const double step = g / h;
        q -= step;
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(q))) break;
    }
    if (poly_eval(u, q) <= best_v) return q;
    return best_q;
}

struct BasisGeometry {
    double omega;
    double center;
};

// Dense diagonalization of H in the oscillator basis of frequency omega
// centered at qc. Returns the lowest `want` eigenvalues, and eigenvectors
// when `vecs` is non-null.
std::vector<double> diagonalize(const OscillatorSpec& spec, const std::vector<double>& upoly,
                                const BasisGeometry& geo, int nbasis, int want,
                                Eigen::MatrixXd* vecs) {
    const double omega = geo.omega;
    const double ell = 1.0 / std::sqrt(spec.mass * omega);
    const std::vector<double> v = taylor_shift(upoly, geo.center);
    const int deg = static_cast<int>(v.size()) - 1;

    // Accumulate sum_j v_j X^j as a banded matrix.
    SymBanded h(nbasis, std::max(2, deg));
    {
        SymBanded xpow(nbasis, 0);
        for (int i = 0; i < nbasis; ++i) xpow.bands[0][i] = 1.0; // X^0
        for (int i = 0; i < nbasis; ++i) h.bands[0][i] += v[0];
        for (int j = 1; j <= deg; ++j) {
            xpow = apply_position(xpow, ell);
            if (v[j] == 0.0) continue;
            const int bw = std::min(xpow.bandwidth(), h.bandwidth());
            for (int b = 0; b <= bw; ++b)
                for (std::size_t i = 0; i < h.bands[b].size(); ++i)
                    h.bands[b][i] += v[j] * xpow.bands[b][i];
        }
    }
    // Kinetic part p^2/(2m) in the same basis.
    for (int i = 0; i < nbasis; ++i) h.bands[0][i] += 0.25 * omega * (2.0 * i + 1.0);
    for (int i = 0; i + 2 < nbasis; ++i)
        h.bands[2][i] += -0.25 * omega * std::sqrt((i + 1.0) * (i + 2.0));

    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(nbasis, nbasis);
    for (int b = 0; b <= h.bandwidth(); ++b)
        for (int i = 0; i + b < nbasis; ++i) {
            dense(i, i + b) = h.bands[b][i];
            dense(i + b, i) = h.bands[b][i];
        }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.compute(dense, vecs ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("solve_spectrum: dense eigensolver failed", 0.0);
    std::vector<double> evals(want);
    for (int i = 0; i < want; ++i) evals[i] = es.eigenvalues()(i);
    if (vecs) *vecs = es.eigenvectors().leftCols(want);
    return evals;
}

BasisGeometry choose_geometry(const OscillatorSpec& spec, const std::vector<double>& upoly,
                              int window) {
    BasisGeometry geo;
    geo.center = spec.even_potential() ? 0.0 : potential_minimum(upoly);

    // Heuristic center frequency: well curvature and the quasi-classical
    // scale of the highest requested level, whichever is stiffer.
    std::vector<double> du(upoly.size() - 1), ddu;
    for (std::size_t j = 1; j < upoly.size(); ++j) du[j - 1] = upoly[j] * j;
    ddu.resize(du.size() - 1);
    for (std::size_t j = 1; j < du.size(); ++j) ddu[j - 1] = du[j] * j;
    double curep = poly_eval(ddu, geo.center);
    double omega0 = curep > 0.0 ? std::sqrt(curep / spec.mass) : 0.0;
    if (!spec.harmonic()) {
        const double br = spec.anharm_coeffs.back();
        const int r = spec.order();
        const double c =
            M_PI * r * std::tgamma(1.5 + 0.5 / r) / (std::tgamma(1.5) * std::tgamma(0.5 / r));
        const double etop = std::pow(br / std::pow(2.0 * spec.mass, r), 1.0 / (r + 1)) *
                            std::pow(c * (window + 0.5), 2.0 * r / (r + 1));
        const double qtop = std::pow(std::max(etop, 1e-300) / br, 0.5 / r);
        const double om_top = (2.0 * window + 1.0) / (spec.mass * qtop * qtop);
        omega0 = std::max(omega0, om_top);
    }
    if (omega0 <= 0.0) omega0 = 1.0 / spec.mass;

    // Probe a geometric frequency grid; the variational criterion is the
    // trace of the lowest `window` levels at a modest basis size.
    const int nprobe = std::max(4 * window, 96);
    double best_omega = omega0;
    double best_trace = std::numeric_limits<double>::infinity();
    for (int k = -3; k <= 3; ++k) {
        BasisGeometry cand{omega0 * std::pow(2.0, k), geo.center};
        try {
            const std::vector<double> ev = diagonalize(spec, upoly, cand, nprobe, window, nullptr);
            double tr = 0.0;
            for (double e : ev) tr += e;
            if (tr < best_trace) {
                best_trace = tr;
                best_omega = cand.omega;
            }
        } catch (const ConvergenceError&) {
            continue;
        }
    }
    geo.omega = best_omega;
    return geo;
}

} // namespace

double OscillatorSpec::potential(double q) const {
    return poly_eval(potential_poly(*this), q);
}

void OscillatorSpec::validate() const {
    if (!(mass > 0.0)) throw DomainError("OscillatorSpec: mass must be positive");
    if (rigidity_a < 0.0) throw DomainError("OscillatorSpec: rigidity_a must be nonnegative");
    if (spin_dim < 1) throw DomainError("OscillatorSpec: spin_dim must be >= 1");
    if (!std::isfinite(field_h)) throw DomainError("OscillatorSpec: field_h must be finite");
    if (anharm_coeffs.empty()) {
        if (!(rigidity_a > 0.0))
            throw DomainError("OscillatorSpec: harmonic spec requires rigidity_a > 0");
        return;
    }
    if (anharm_coeffs.size() < 2)
        throw DomainError("OscillatorSpec: anharmonicity order r must be >= 2");
    if (!(anharm_coeffs.back() > 0.0))
        throw DomainError("OscillatorSpec: leading coefficient b_r must be positive (confining)");
    for (double b : anharm_coeffs)
        if (!std::isfinite(b)) throw DomainError("OscillatorSpec: coefficients must be finite");
}

SpectrumResult solve_spectrum(const OscillatorSpec& spec, int n_levels, double tol) {
    spec.validate();
    if (n_levels < 2) throw DomainError("solve_spectrum: n_levels must be >= 2");
    if (!(tol > 0.0)) throw DomainError("solve_spectrum: tol must be positive");

    const std::vector<double> upoly = potential_poly(spec);
    int window = std::max(16, 2 * n_levels);
    constexpr int kMaxBasis = 8192;

    for (int attempt = 0; attempt < 3; ++attempt) {
        const BasisGeometry geo = choose_geometry(spec, upoly, window);

        int nbasis = std::max(128, 4 * window);
        std::vector<double> prev = diagonalize(spec, upoly, geo, nbasis, window, nullptr);
        double estimate = std::numeric_limits<double>::infinity();
        Eigen::MatrixXd vecs;
        std::vector<double> cur;
        bool converged = false;
        while (nbasis * 2 <= kMaxBasis) {
            nbasis *= 2;
            cur = diagonalize(spec, upoly, geo, nbasis, window, nullptr);
            const double span = std::max(cur[window - 1] - cur[0], 1e-300);
            estimate = 0.0;
            for (int i = 0; i < window; ++i) {
                const double denom = std::max(std::abs(cur[i]), 0.01 * span);
                estimate = std::max(estimate, std::abs(cur[i] - prev[i]) / denom);
            }
            prev = cur;
            if (estimate <= tol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw ConvergenceError("solve_spectrum: basis budget exhausted", estimate);

        // Final pass with eigenvectors for the Q matrix.
        cur = diagonalize(spec, upoly, geo, nbasis, window, &vecs);

        SpectrumResult res;
        res.spec = spec;
        res.energies = cur;
        res.basis_size = nbasis;
        res.convergence_estimate = estimate;

        // Q = qc I + X in the eigenbasis, restricted to the window.
        const double ell = 1.0 / std::sqrt(spec.mass * geo.omega);
        Eigen::MatrixXd xv = Eigen::MatrixXd::Zero(nbasis, window);
        for (int c = 0; c < window; ++c)
            for (int i = 0; i < nbasis; ++i) {
                double v = 0.0;
                if (i > 0) v += ell * std::sqrt(0.5 * i) * vecs(i - 1, c);
                if (i + 1 < nbasis) v += ell * std::sqrt(0.5 * (i + 1)) * vecs(i + 1, c);
                xv(i, c) = v;
            }
        Eigen::MatrixXd q = vecs.transpose() * xv;
        res.q_matrix.resize(static_cast<std::size_t>(window) * window);
        for (int i = 0; i < window; ++i)
            for (int j = 0; j < window; ++j)
                res.q_matrix[static_cast<std::size_t>(i) * window + j] =
                    q(i, j) + (i == j ? geo.center : 0.0);

        int gap_index = 1;
        double gap = cur[1] - cur[0];
        for (int i = 2; i < window; ++i)
            if (cur[i] - cur[i - 1] < gap) {
                gap = cur[i] - cur[i - 1];
                gap_index = i;
            }
        res.gap = gap;
        res.rigidity = spec.mass * gap * gap;
        res.gap_index = gap_index;
        res.gap_interior = gap_index < window - 1;
        if (res.gap_interior) return res;

        // Minimal spacing sat on the window edge: enlarge and re-solve.
        if (attempt == 2) return res; // report with gap_interior = false
        window *= 2;
    }
    throw ConvergenceError("solve_spectrum: unreachable", 0.0);
}

double wkb_eigenvalue(const OscillatorSpec& spec, int n) {
    spec.validate();
    if (n < 0) throw DomainError("wkb_eigenvalue: n must be >= 0");
    if (spec.harmonic())
        throw DomainError("wkb_eigenvalue: requires an even polynomial well (r >= 2)");
    if (!spec.even_potential())
        throw DomainError("wkb_eigenvalue: requires an even potential (h = 0)");
    const int r = spec.order();
    const double br = spec.anharm_coeffs.back();
    const double pref = std::pow(br / std::pow(2.0 * spec.mass, r), 1.0 / (r + 1));
    const double c =
        M_PI * r * std::tgamma(1.5 + 0.5 / r) / (std::tgamma(1.5) * std::tgamma(0.5 / r));
    return pref * std::pow(c * (n + 0.5), 2.0 * r / (r + 1));
}

ScaledSpec scaled_spec(const OscillatorSpec& spec, double m0) {
    spec.validate();
    if (!(m0 > 0.0)) throw DomainError("scaled_spec: m0 must be positive");
    if (spec.harmonic() || !spec.even_potential())
        throw DomainError("scaled_spec: requires an even polynomial well (r >= 2, h = 0)");
    const int r = spec.order();
    ScaledSpec out;
    out.rho = std::pow(spec.mass / m0, 1.0 / (r + 1));
    out.spec = spec;
    out.spec.mass = m0;
    out.spec.rigidity_a = 0.0;
    out.spec.anharm_coeffs[0] =
        std::pow(out.rho, r - 1) * (spec.anharm_coeffs[0] + 0.5 * spec.rigidity_a);
    for (int s = 2; s <= r; ++s)
        out.spec.anharm_coeffs[s - 1] = std::pow(out.rho, r - s) * spec.anharm_coeffs[s - 1];
    return out;
}

} // namespace qac
