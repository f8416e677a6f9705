#include "qac/pimc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qac/anharmonicity.hpp"
#include "qac/correlation.hpp"
#include "qac/errors.hpp"
#include "qac/matsubara.hpp"
#include "qac/thresholds.hpp"

namespace qac::pimc {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// On-site potential U(x) = (a/2)|x|^2 + sum_s b_s |x|^{2s} - h x^(1).
double site_potential(const OscillatorSpec& osc, std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    double v = 0.5 * osc.rigidity_a * r2;
    double r2pow = r2;
    for (double b : osc.anharm_coeffs) {
        v += b * r2pow;
        r2pow *= r2;
    }
    return v - osc.field_h * x[0];
}

} // namespace

long SimConfig::n_sites() const {
    long n = 1;
    for (int j = 0; j < dimension; ++j) n *= box_side;
    return n;
}

void SimConfig::validate() const {
    oscillator.validate();
    if (dimension < 1) throw DomainError("SimConfig: dimension must be >= 1");
    if (box_side < 2) throw DomainError("SimConfig: box_side must be >= 2");
    if (slices < 8) throw DomainError("SimConfig: slices must be >= 8");
    if (!(beta > 0.0)) throw DomainError("SimConfig: beta must be positive");
    if (coupling_j < 0.0) throw DomainError("SimConfig: coupling_j must be >= 0");
    if (sweeps < 1 || thermalization < 0 || stride < 1)
        throw DomainError("SimConfig: bad sweep counts");
    if (!(step_site > 0.0) || !(step_loop > 0.0))
        throw DomainError("SimConfig: step widths must be positive");
    if (alpha < 0.0 || alpha > 1.0) throw DomainError("SimConfig: alpha must be in [0, 1]");
}

LoopField LoopField::zeros(const SimConfig& cfg) {
    LoopField f;
    f.n_sites = cfg.n_sites();
    f.slices = cfg.slices;
    f.comps = cfg.oscillator.spin_dim;
    f.x.assign(static_cast<std::size_t>(f.n_sites) * f.slices * f.comps, 0.0);
    return f;
}

LatticeGeometry::LatticeGeometry(const SimConfig& cfg) {
    dim_ = cfg.dimension;
    side_ = cfg.box_side;
    n_sites_ = cfg.n_sites();
    const double J = cfg.coupling_j;

    stride_ = (side_ == 2) ? dim_ : 2 * dim_;
    adj_.resize(static_cast<std::size_t>(n_sites_) * stride_);

    std::vector<long> axis_stride(dim_);
    axis_stride[0] = 1;
    for (int a = 1; a < dim_; ++a) axis_stride[a] = axis_stride[a - 1] * side_;

    for (long s = 0; s < n_sites_; ++s) {
        int slot = 0;
        long rem = s;
        for (int a = 0; a < dim_; ++a) {
            const int ca = static_cast<int>((rem / axis_stride[a]) % side_);
            const long up = s + ((ca + 1) % side_ - ca) * axis_stride[a];
            const long dn = s + ((ca - 1 + side_) % side_ - ca) * axis_stride[a];
            if (side_ == 2) {
                adj_[s * stride_ + slot++] = {up, J};
                if (ca == 0) edges_.emplace_back(s, up, J);
            } else {
                adj_[s * stride_ + slot++] = {up, J};
                adj_[s * stride_ + slot++] = {dn, J};
                edges_.emplace_back(s, up, J);
            }
        }
        (void)rem;
    }
}

std::vector<int> LatticeGeometry::coords(long site) const {
    std::vector<int> c(dim_);
    long rem = site;
    for (int a = 0; a < dim_; ++a) {
        c[a] = static_cast<int>(rem % side_);
        rem /= side_;
    }
    return c;
}

double discretized_action(const LoopField& field, const SimConfig& cfg) {
    const int P = cfg.slices, nu = field.comps;
    const double m = cfg.oscillator.mass;
    const double kin_w = 0.5 * m * P / cfg.beta;
    const double pot_w = cfg.beta / P;
    double a = 0.0;
    for (long s = 0; s < field.n_sites; ++s) {
        for (int t = 0; t < P; ++t) {
            const int tn = (t + 1) % P;
            double kin = 0.0;
            for (int c = 0; c < nu; ++c) {
                const double d = field.at(s, tn, c) - field.at(s, t, c);
                kin += d * d;
            }
            std::vector<double> xs(nu);
            for (int c = 0; c < nu; ++c) xs[c] = field.at(s, t, c);
            a += kin_w * kin + pot_w * site_potential(cfg.oscillator, xs);
        }
    }
    const LatticeGeometry geo(cfg);
    for (const auto& [sa, sb, w] : geo.edges()) {
        for (int t = 0; t < P; ++t) {
            double dot = 0.0;
            for (int c = 0; c < nu; ++c) dot += field.at(sa, t, c) * field.at(sb, t, c);
            a -= pot_w * w * dot;
        }
    }
    return a;
}

double action_delta_site(const LoopField& field, const SimConfig& cfg,
                         const LatticeGeometry& geo, long site, int t,
                         std::span<const double> x_new) {
    const int P = cfg.slices, nu = field.comps;
    const double kin_w = 0.5 * cfg.oscillator.mass * P / cfg.beta;
    const double pot_w = cfg.beta / P;
    const int tp = (t + P - 1) % P, tn = (t + 1) % P;

    double dkin = 0.0;
    std::vector<double> xo(nu);
    for (int c = 0; c < nu; ++c) {
        xo[c] = field.at(site, t, c);
        const double prev = field.at(site, tp, c), next = field.at(site, tn, c);
        const double dn = x_new[c];
        dkin += (dn - prev) * (dn - prev) + (next - dn) * (next - dn) -
                (xo[c] - prev) * (xo[c] - prev) - (next - xo[c]) * (next - xo[c]);
    }
    double da = kin_w * dkin +
                pot_w * (site_potential(cfg.oscillator, x_new) -
                         site_potential(cfg.oscillator, xo));
    for (const auto& [nbr, w] : geo.neighbors(site)) {
        double dot = 0.0;
        for (int c = 0; c < nu; ++c) dot += (x_new[c] - xo[c]) * field.at(nbr, t, c);
        da -= pot_w * w * dot;
    }
    return da;
}

double action_delta_loop(const LoopField& field, const SimConfig& cfg,
                         const LatticeGeometry& geo, long site, std::span<const double> delta) {
    const int P = cfg.slices, nu = field.comps;
    const double pot_w = cfg.beta / P;
    double da = 0.0;
    std::vector<double> xo(nu), xn(nu);
    for (int t = 0; t < P; ++t) {
        for (int c = 0; c < nu; ++c) {
            xo[c] = field.at(site, t, c);
            xn[c] = xo[c] + delta[c];
        }
        da += pot_w * (site_potential(cfg.oscillator, xn) - site_potential(cfg.oscillator, xo));
        for (const auto& [nbr, w] : geo.neighbors(site)) {
            double dot = 0.0;
            for (int c = 0; c < nu; ++c) dot += delta[c] * field.at(nbr, t, c);
            da -= pot_w * w * dot;
        }
    }
    return da;
}

Sampler::Sampler(const SimConfig& cfg, std::uint64_t chain)
    : cfg_(cfg), geo_(cfg), field_(LoopField::zeros(cfg)),
      rng_(splitmix64(cfg.seed ^ (0x51c5a1c5u + chain * 0x9e3779b97f4a7c15ULL))),
      step_site_(cfg.step_site), step_loop_(cfg.step_loop) {
    cfg_.validate();
}

double Sampler::uniform() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

void Sampler::set_steps(double site, double loop) {
    step_site_ = site;
    step_loop_ = loop;
}

SweepStats Sampler::sweep() {
    const int P = cfg_.slices, nu = field_.comps;
    long acc_site = 0, acc_loop = 0;
    std::vector<double> prop(nu);

    for (long s = 0; s < field_.n_sites; ++s) {
        for (int t = 0; t < P; ++t) {
            for (int c = 0; c < nu; ++c)
                prop[c] = field_.at(s, t, c) + step_site_ * (2.0 * uniform() - 1.0);
            const double da = action_delta_site(field_, cfg_, geo_, s, t, prop);
            if (da <= 0.0 || uniform() < std::exp(-da)) {
                for (int c = 0; c < nu; ++c) field_.at(s, t, c) = prop[c];
                ++acc_site;
            }
        }
    }
    for (long s = 0; s < field_.n_sites; ++s) {
        for (int c = 0; c < nu; ++c) prop[c] = step_loop_ * (2.0 * uniform() - 1.0);
        const double da = action_delta_loop(field_, cfg_, geo_, s, prop);
        if (da <= 0.0 || uniform() < std::exp(-da)) {
            for (int t = 0; t < P; ++t)
                for (int c = 0; c < nu; ++c) field_.at(s, t, c) += prop[c];
            ++acc_loop;
        }
    }
    SweepStats st;
    st.accept_site = static_cast<double>(acc_site) / (static_cast<double>(field_.n_sites) * P);
    st.accept_loop = static_cast<double>(acc_loop) / static_cast<double>(field_.n_sites);
    return st;
}

double obs_q2(const LoopField& f) {
    double s = 0.0;
    for (double v : f.x) s += v * v;
    return s / (static_cast<double>(f.n_sites) * f.slices);
}

std::vector<double> obs_polarization(const LoopField& f) {
    std::vector<double> m(f.comps, 0.0);
    for (long site = 0; site < f.n_sites; ++site)
        for (int t = 0; t < f.slices; ++t)
            for (int c = 0; c < f.comps; ++c) m[c] += f.at(site, t, c);
    const double norm = static_cast<double>(f.n_sites) * f.slices;
    for (double& v : m) v /= norm;
    return m;
}

double harmonic_q2_discrete(double mass, double a, double beta, int slices, int nu) {
    double s = 0.0;
    for (int k = 0; k < slices; ++k) {
        const double lam =
            2.0 * mass * slices / beta * (1.0 - std::cos(2.0 * M_PI * k / slices)) +
            beta * a / slices;
        s += 1.0 / lam;
    }
    return nu * s / slices;
}

double harmonic_q2_continuum(double mass, double a, double beta, int nu) {
    const double om = std::sqrt(a / mass);
    return nu / std::tanh(0.5 * beta * om) / (2.0 * mass * om);
}

double harmonic_increment_discrete(double mass, double a, double beta, int slices, int nu,
                                   int slice_sep) {
    double s = 0.0;
    for (int k = 0; k < slices; ++k) {
        const double lam =
            2.0 * mass * slices / beta * (1.0 - std::cos(2.0 * M_PI * k / slices)) +
            beta * a / slices;
        s += (1.0 - std::cos(2.0 * M_PI * k * slice_sep / slices)) / lam;
    }
    return nu * 2.0 * s / slices;
}

namespace {

struct MeasurementBank {
    std::vector<double> q2;
    std::vector<std::vector<double>> pol;     // [comp][sample]
    std::vector<std::vector<double>> dhat;    // [p][sample]
    std::vector<std::vector<double>> doff;    // [offset][sample]
    std::vector<double> sum2;                 // |sum_l xbar_l|^2
};

// D(offset) and D^_p estimators from the time-averaged configuration.
void measure_config(const LoopField& f, const SimConfig& cfg,
                    const std::vector<std::vector<double>>& cos_tab,
                    const std::vector<std::vector<double>>& sin_tab,
                    const std::vector<std::vector<long>>& shift, MeasurementBank& bank) {
    const long ns = f.n_sites;
    const int nu = f.comps, P = f.slices;
    const double beta2 = cfg.beta * cfg.beta;

    bank.q2.push_back(obs_q2(f));
    const std::vector<double> pol = obs_polarization(f);
    for (int c = 0; c < nu; ++c) bank.pol[c].push_back(pol[c]);

    // time-averaged displacement per site and component
    std::vector<double> xbar(static_cast<std::size_t>(ns) * nu, 0.0);
    for (long s = 0; s < ns; ++s)
        for (int t = 0; t < P; ++t)
            for (int c = 0; c < nu; ++c) xbar[s * nu + c] += f.at(s, t, c);
    for (double& v : xbar) v /= P;

    double stot = 0.0;
    for (int c = 0; c < nu; ++c) {
        double sc = 0.0;
        for (long s = 0; s < ns; ++s) sc += xbar[s * nu + c];
        stot += sc * sc;
    }
    bank.sum2.push_back(stot);

    for (long ip = 0; ip < ns; ++ip) {
        double val = 0.0;
        for (int c = 0; c < nu; ++c) {
            double re = 0.0, im = 0.0;
            for (long s = 0; s < ns; ++s) {
                re += cos_tab[ip][s] * xbar[s * nu + c];
                im += sin_tab[ip][s] * xbar[s * nu + c];
            }
            val += re * re + im * im;
        }
        bank.dhat[ip].push_back(beta2 * val / static_cast<double>(ns));
    }
    for (long io = 0; io < ns; ++io) {
        double val = 0.0;
        for (long s = 0; s < ns; ++s) {
            const long s2 = shift[io][s];
            for (int c = 0; c < nu; ++c) val += xbar[s * nu + c] * xbar[s2 * nu + c];
        }
        bank.doff[io].push_back(beta2 * val / static_cast<double>(ns));
    }
}

std::string describe(const std::vector<int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

} // namespace

SimReport run(const SimConfig& cfg) {
    cfg.validate();
    SimReport rep;
    rep.config = cfg;

    Sampler sampler(cfg);
    const long ns = cfg.n_sites();
    const int nu = cfg.oscillator.spin_dim;
    const int d = cfg.dimension, L = cfg.box_side;

    // thermalization, with optional step tuning frozen afterwards
    double acc_site_acc = 0.0, acc_loop_acc = 0.0;
    long tune_window = 0;
    for (long i = 0; i < cfg.thermalization; ++i) {
        const SweepStats st = sampler.sweep();
        acc_site_acc += st.accept_site;
        acc_loop_acc += st.accept_loop;
        ++tune_window;
        if (cfg.tune_steps && tune_window == 64) {
            const double as = acc_site_acc / tune_window, al = acc_loop_acc / tune_window;
            double ss = sampler.step_site(), sl = sampler.step_loop();
            if (as < 0.35) ss *= 0.8;
            if (as > 0.65) ss *= 1.25;
            if (al < 0.35) sl *= 0.8;
            if (al > 0.65) sl *= 1.25;
            sampler.set_steps(std::clamp(ss, 1e-3, 50.0), std::clamp(sl, 1e-3, 50.0));
            acc_site_acc = acc_loop_acc = 0.0;
            tune_window = 0;
        }
    }
    rep.step_site_used = sampler.step_site();
    rep.step_loop_used = sampler.step_loop();

    // momentum set and offset set (all torus vectors), plus DFT tables
    const LatticeGeometry& geo = sampler.geometry();
    std::vector<std::vector<int>> svecs(ns);
    for (long ip = 0; ip < ns; ++ip) svecs[ip] = geo.coords(ip);
    std::vector<std::vector<double>> cos_tab(ns, std::vector<double>(ns));
    std::vector<std::vector<double>> sin_tab(ns, std::vector<double>(ns));
    std::vector<std::vector<long>> shift(ns, std::vector<long>(ns));
    for (long ip = 0; ip < ns; ++ip) {
        for (long s = 0; s < ns; ++s) {
            double phase = 0.0;
            const std::vector<int> cs = geo.coords(s);
            for (int a = 0; a < d; ++a)
                phase += 2.0 * M_PI * svecs[ip][a] * cs[a] / L;
            cos_tab[ip][s] = std::cos(phase);
            sin_tab[ip][s] = std::sin(phase);
            // shifted site index for offset ip
            long idx = 0, mult = 1;
            for (int a = 0; a < d; ++a) {
                idx += ((cs[a] + svecs[ip][a]) % L) * mult;
                mult *= L;
            }
            shift[ip][s] = idx;
        }
    }

    MeasurementBank bank;
    bank.pol.resize(nu);
    bank.dhat.resize(ns);
    bank.doff.resize(ns);

    double acc_site = 0.0, acc_loop = 0.0;
    long nmeas = 0;
    for (long i = 0; i < cfg.sweeps; ++i) {
        const SweepStats st = sampler.sweep();
        acc_site += st.accept_site;
        acc_loop += st.accept_loop;
        if (i % cfg.stride == 0) {
            measure_config(sampler.field(), cfg, cos_tab, sin_tab, shift, bank);
            ++nmeas;
        }
    }
    rep.acceptance.accept_site = acc_site / static_cast<double>(cfg.sweeps);
    rep.acceptance.accept_loop = acc_loop / static_cast<double>(cfg.sweeps);

    rep.q2 = blocking_estimate(bank.q2);
    rep.polarization.resize(nu);
    for (int c = 0; c < nu; ++c) rep.polarization[c] = blocking_estimate(bank.pol[c]);
    rep.duhamel_diag = blocking_estimate(bank.doff[0]);

    rep.duhamel.resize(ns);
    for (long io = 0; io < ns; ++io) {
        rep.duhamel[io].offset = svecs[io];
        rep.duhamel[io].value = blocking_estimate(bank.doff[io]);
    }

    rep.infrared.resize(ns);
    double dhat_zone_avg = 0.0;
    for (long ip = 0; ip < ns; ++ip) {
        MomentumPoint& mp = rep.infrared[ip];
        mp.s = svecs[ip];
        double e = 0.0;
        for (int a = 0; a < d; ++a) e += 1.0 - std::cos(2.0 * M_PI * mp.s[a] / L);
        mp.dispersion = e;
        mp.dhat = blocking_estimate(bank.dhat[ip]);
        mp.bound = (e > 0.0 && cfg.coupling_j > 0.0)
                       ? cfg.beta * nu / (2.0 * cfg.coupling_j * e)
                       : std::numeric_limits<double>::infinity();
        dhat_zone_avg += mp.dhat.mean;
        if (e > 0.0 && std::isfinite(mp.bound) &&
            mp.dhat.mean > mp.bound + 3.0 * mp.dhat.err)
            ++rep.infrared_violations;
    }
    rep.parseval_lhs = dhat_zone_avg / static_cast<double>(ns);
    rep.parseval_rhs = rep.duhamel_diag.mean;

    // order parameters from |sum_l xbar_l|^2
    auto scaled = [&](double expo) {
        std::vector<double> v(bank.sum2.size());
        const double norm = std::pow(static_cast<double>(ns), expo);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = bank.sum2[i] / norm;
        return v;
    };
    {
        const std::vector<double> p1 = scaled(2.0);
        rep.order_parameter = blocking_estimate(p1);
        const std::vector<double> pa = scaled(1.0 + cfg.alpha);
        rep.order_parameter_alpha = blocking_estimate(pa);
        const std::vector<double> p0 = scaled(1.0);
        rep.fluctuation_parameter = blocking_estimate(p0);
    }

    // analytic comparisons
    const OscillatorSpec& osc = cfg.oscillator;
    if (osc.harmonic()) {
        rep.harmonic_q2_continuum = harmonic_q2_continuum(osc.mass, osc.rigidity_a, cfg.beta, nu);
        rep.harmonic_q2_discrete =
            harmonic_q2_discrete(osc.mass, osc.rigidity_a, cfg.beta, cfg.slices, nu);
    }
    if (!osc.harmonic() && osc.even_potential()) {
        try {
            const double ts = theta_star(osc.anharm_coeffs, osc.rigidity_a);
            rep.theta_star = ts;
            rep.duhamel_diag_lower = duhamel_lower_bound(cfg.beta, nu, ts, osc.mass);
        } catch (const DomainError&) {
            rep.notes += "theta_star undefined (no double-well regime); ";
        }
    }
    try {
        OscillatorSpec scalar_ref = osc;
        scalar_ref.spin_dim = 1;
        int n_levels = 12;
        for (;;) {
            try {
                const SpectrumResult sp = solve_spectrum(scalar_ref, n_levels, 1e-8);
                const MatsubaraTable u = matsubara_u(sp, cfg.beta, 256);
                const CouplingSpec coup = CouplingSpec::nearest_neighbor(cfg.coupling_j, d);
                if (u.at_kappa(0) * coup.j0_hat < 1.0) {
                    const std::vector<int> origin(d, 0);
                    rep.corr_bound_q2 = nu * corr_bound(origin, 0.0, u, coup, d, 1e-8);
                    rep.finite_box_q2 = nu * finite_box_bound(origin, 0.0, u, coup, d, L);
                } else {
                    rep.notes += "stability margin not positive; correlation bound skipped; ";
                }
                break;
            } catch (const TruncationError&) {
                n_levels *= 2;
                if (n_levels > 96) throw;
            }
        }
    } catch (const std::exception& e) {
        rep.notes += std::string("correlation bound unavailable: ") + e.what() + "; ";
    }
    return rep;
}

std::string format_report(const SimReport& r) {
    std::ostringstream os;
    os.precision(12);
    const SimConfig& c = r.config;
    os << "pimc_report:\n";
    os << "  lattice: d=" << c.dimension << " L=" << c.box_side << " P=" << c.slices
       << " beta=" << c.beta << " J=" << c.coupling_j << "\n";
    os << "  oscillator: m=" << c.oscillator.mass << " a=" << c.oscillator.rigidity_a << " b=[";
    for (std::size_t i = 0; i < c.oscillator.anharm_coeffs.size(); ++i)
        os << (i ? "," : "") << c.oscillator.anharm_coeffs[i];
    os << "] nu=" << c.oscillator.spin_dim << " h=" << c.oscillator.field_h << "\n";
    os << "  sweeps: " << c.sweeps << " thermalization=" << c.thermalization
       << " stride=" << c.stride << " seed=" << c.seed << "\n";
    os << "  steps_used: site=" << r.step_site_used << " loop=" << r.step_loop_used << "\n";
    os << "  acceptance: site=" << r.acceptance.accept_site
       << " loop=" << r.acceptance.accept_loop << "\n";
    auto est = [&](const char* name, const Estimate& e) {
        os << "  " << name << ": " << e.mean << " +- " << e.err << " (tau=" << e.tau
           << ", n=" << e.count << ", level=" << e.plateau_level << ")\n";
    };
    est("q2", r.q2);
    for (std::size_t cidx = 0; cidx < r.polarization.size(); ++cidx)
        est(("polarization_" + std::to_string(cidx + 1)).c_str(), r.polarization[cidx]);
    est("duhamel_diag", r.duhamel_diag);
    est("order_parameter", r.order_parameter);
    est("order_parameter_alpha", r.order_parameter_alpha);
    est("fluctuation_parameter", r.fluctuation_parameter);
    os << "  parseval: zone_avg=" << r.parseval_lhs << " diag=" << r.parseval_rhs << "\n";
    os << "  infrared_violations: " << r.infrared_violations << "\n";
    if (r.theta_star) os << "  theta_star: " << *r.theta_star << "\n";
    if (r.duhamel_diag_lower) os << "  duhamel_diag_lower: " << *r.duhamel_diag_lower << "\n";
    if (r.harmonic_q2_continuum)
        os << "  harmonic_q2_continuum: " << *r.harmonic_q2_continuum << "\n";
    if (r.harmonic_q2_discrete)
        os << "  harmonic_q2_discrete: " << *r.harmonic_q2_discrete << "\n";
    if (r.corr_bound_q2) os << "  corr_bound_q2: " << *r.corr_bound_q2 << "\n";
    if (r.finite_box_q2) os << "  finite_box_q2: " << *r.finite_box_q2 << "\n";
    os << "  infrared:\n";
    for (const MomentumPoint& mp : r.infrared) {
        os << "    p=" << describe(mp.s) << " E=" << mp.dispersion << " dhat=" << mp.dhat.mean
           << " +- " << mp.dhat.err << " bound=" << mp.bound << "\n";
    }
    os << "  duhamel_offsets:\n";
    for (const OffsetPoint& op : r.duhamel) {
        os << "    l=" << describe(op.offset) << " D=" << op.value.mean << " +- "
           << op.value.err << "\n";
    }
    if (!r.notes.empty()) os << "  notes: " << r.notes << "\n";
    return os.str();
}

} // namespace qac::pimc
