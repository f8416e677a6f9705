#include "qac/brillouin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "qac/errors.hpp"
#include "qac/special.hpp"

namespace qac {

namespace {

// ---------------------------------------------------------------- quadrature

struct GaussRule {
    std::vector<double> x; // nodes on [-1, 1]
    std::vector<double> w;
};

// Legendre nodes by Newton iteration on P_n; cached per order.
const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

int thread_count() {
    if (const char* env = std::getenv("QAC_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

// Deterministic parallel reduction: the chunk grid is fixed (independent of
// the worker count) and partial sums are combined in chunk order.
template <typename T, typename Fn>
T chunked_sum(long total, Fn&& body) {
    const long kChunks = 64;
    const long chunk = (total + kChunks - 1) / kChunks;
    std::vector<T> partial(kChunks, T{});
    const int nthreads = std::min<long>(thread_count(), kChunks);
    if (nthreads <= 1) {
        for (long c = 0; c < kChunks; ++c) {
            T s{};
            const long lo = c * chunk, hi = std::min(total, lo + chunk);
            for (long i = lo; i < hi; ++i) s += body(i);
            partial[c] = s;
        }
    } else {
        std::vector<std::thread> pool;
        for (int tidx = 0; tidx < nthreads; ++tidx) {
            pool.emplace_back([&, tidx] {
                for (long c = tidx; c < kChunks; c += nthreads) {
                    T s{};
                    const long lo = c * chunk, hi = std::min(total, lo + chunk);
                    for (long i = lo; i < hi; ++i) s += body(i);
                    partial[c] = s;
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    T sum{};
    for (const T& s : partial) sum += s;
    return sum;
}

// One face-pyramid pass of the zone integral at a given node count.
// The zone (-pi,pi]^d splits into 2d pyramids with apex at the origin and
// base on a zone face; on each pyramid p = t*q with q on the face, the
// Jacobian t^{d-1} absorbs integrable 1/|p|^2 singularities for d >= 3.
template <typename T, typename Fn>
T pyramid_pass(int d, const Fn& f, int n) {
    const GaussRule& rt = gauss_rule(n);      // t on [0, 1]
    const GaussRule& ru = gauss_rule(n);      // each transverse axis on [-pi, pi]
    long nu_total = 1;
    for (int j = 0; j < d - 1; ++j) nu_total *= n;
    const long total = 2L * d * n * nu_total;

    return chunked_sum<T>(total, [&](long flat) -> T {
        long rem = flat;
        const int face = static_cast<int>(rem % (2 * d));
        rem /= 2 * d;
        const int it = static_cast<int>(rem % n);
        rem /= n;

        const int axis = face / 2;
        const double sign = (face % 2 == 0) ? 1.0 : -1.0;
        const double t = 0.5 * (rt.x[it] + 1.0);
        double weight = 0.5 * rt.w[it] * std::pow(t, d - 1) * M_PI;

        double q[8];
        q[axis] = sign * M_PI;
        for (int j = 0, k = 0; j < d; ++j) {
            if (j == axis) continue;
            const int iu = static_cast<int>(rem % n);
            rem /= n;
            q[j] = M_PI * ru.x[iu];
            weight *= M_PI * ru.w[iu];
            ++k;
        }
        double p[8];
        for (int j = 0; j < d; ++j) p[j] = t * q[j];
        return f(std::span<const double>(p, static_cast<std::size_t>(d))) * weight;
    });
}

template <typename T, typename Fn>
T zone_integrate(int d, const Fn& f, double tol, double* err_out) {
    if (d < 1 || d > 8) throw DomainError("brillouin_integrate: d must be in 1..8");
    const double norm = std::pow(2.0 * M_PI, -d);
    static const int kOrders[] = {12, 17, 24, 34, 48, 68, 96, 136, 192};
    T prev{};
    bool have_prev = false;
    double err = 0.0;
    for (int order : kOrders) {
        if (std::pow(static_cast<double>(order), d) * 2 * d > 6e8) break;
        T cur = pyramid_pass<T>(d, f, order) * norm;
        if (have_prev) {
            err = std::abs(cur - prev);
            if (err <= std::max(tol, 32.0 * 1e-16 * std::abs(cur))) {
                if (err_out) *err_out = err;
                return cur;
            }
        }
        prev = cur;
        have_prev = true;
    }
    throw AccuracyError("brillouin_integrate: tolerance not reached", err);
}

// ------------------------------------------------------- Laplace-Bessel form

// Asymptotic tail  Int_T^inf (2 pi t)^{-d/2} (1 + c1/t + c2/t^2 + c3/t^3) dt
// for [e^-t I_0(t)]^d, from (sum_k A_k t^-k)^d with A_1 = 1/8, A_2 = 9/128,
// A_3 = 75/1024.
struct TailModel {
    double c1, c2, c3, c4mag;
};

TailModel i0e_pow_tail(int d) {
    const double a1 = 1.0 / 8.0, a2 = 9.0 / 128.0, a3 = 75.0 / 1024.0;
    TailModel m{};
    m.c1 = d * a1;
    m.c2 = d * a2 + 0.5 * d * (d - 1) * a1 * a1;
    m.c3 = d * a3 + d * (d - 1) * a1 * a2 + d * (d - 1) * (d - 2) / 6.0 * a1 * a1 * a1;
    // magnitude guess for the dropped 1/t^4 coefficient, used for T selection
    m.c4mag = std::abs(m.c3) * (std::abs(m.c1) + 1.0);
    return m;
}

double tail_integral(int d, double T, const TailModel& m, double* err_bound) {
    const double h = 0.5 * d;
    const double pref = std::pow(2.0 * M_PI, -h);
    auto piece = [&](double c, int j) { return c * std::pow(T, 1.0 - h - j) / (h + j - 1.0); };
    const double v = pref * (piece(1.0, 0) + piece(m.c1, 1) + piece(m.c2, 2) + piece(m.c3, 3));
    if (err_bound) *err_bound = pref * std::abs(piece(m.c4mag, 4));
    return v;
}

// Composite Gauss panels on [0, T] with geometric panel growth.
template <typename Fn>
double panel_integrate(const Fn& g, double T, int order) {
    const GaussRule& r = gauss_rule(order);
    double sum = 0.0;
    double lo = 0.0, hi = 1.0;
    while (lo < T) {
        if (hi > T) hi = T;
        const double c = 0.5 * (hi + lo), halfw = 0.5 * (hi - lo);
        double s = 0.0;
        for (int i = 0; i < order; ++i) s += r.w[i] * g(c + halfw * r.x[i]);
        sum += s * halfw;
        lo = hi;
        hi = 2.0 * hi;
    }
    return sum;
}

double green_j_bessel(int d, double tol, double* err_out) {
    const TailModel m = i0e_pow_tail(d);
    double T = 64.0, tail_err = 0.0;
    for (int i = 0; i < 24; ++i) {
        tail_integral(d, T, m, &tail_err);
        if (tail_err < 0.1 * tol) break;
        T *= 2.0;
    }
    auto g = [d](double t) { return std::pow(bessel_i0e(t), d); };
    const double coarse = panel_integrate(g, T, 24);
    const double fine = panel_integrate(g, T, 34);
    const double quad_err = std::abs(fine - coarse);
    const double tail = tail_integral(d, T, m, nullptr);
    const double err = quad_err + tail_err;
    if (err > tol) throw AccuracyError("green_j: tolerance not reached", err);
    if (err_out) *err_out = err;
    return fine + tail;
}

} // namespace

double dispersion(std::span<const double> p) {
    double e = 0.0;
    for (double pj : p) {
        if (pj < -M_PI - 1e-12 || pj > M_PI + 1e-12)
            throw DomainError("dispersion: component outside (-pi, pi]");
        e += 1.0 - std::cos(pj);
    }
    return e;
}

GreenResult green_j(int d, double tol, GreenMethod method) {
    if (d <= 2) throw DomainError("green_j: integral diverges for d <= 2");
    if (tol <= 0.0) throw DomainError("green_j: tol must be positive");
    GreenResult res;
    res.dimension = d;
    res.method = method;
    if (method == GreenMethod::laplace_bessel) {
        res.value = green_j_bessel(d, tol, &res.abs_error_estimate);
    } else {
        if (d > 4)
            throw DomainError("green_j: direct zone quadrature supported for d <= 4 only");
        res.value = zone_integrate<double>(
            d, [](std::span<const double> p) { return 1.0 / dispersion(p); }, tol,
            &res.abs_error_estimate);
    }
    return res;
}

double green_offset(int d, std::span<const int> offset, double tol) {
    if (d <= 2) throw DomainError("green_offset: integral diverges for d <= 2");
    if (offset.size() != static_cast<std::size_t>(d))
        throw DomainError("green_offset: offset size must equal d");
    int nmax = 0;
    for (int nj : offset) nmax = std::max(nmax, std::abs(nj));
    if (nmax == 0) return green_j(d, tol).value;

    // e^{-dt} prod_j I_{n_j}(t) shares the (2 pi t)^{-d/2} leading tail with
    // the origin case; the first correction picks up -(4 n_j^2 - 1)/8 per axis.
    double c1 = 0.0, c2mag = 0.0;
    for (int nj : offset) {
        const double a = 4.0 * static_cast<double>(nj) * nj - 1.0;
        c1 += -a / 8.0;
        c2mag += a * a / 64.0;
    }
    c2mag += c1 * c1;
    const double h = 0.5 * d;
    const double pref = std::pow(2.0 * M_PI, -h);
    double T = std::max(128.0, 16.0 * (1.0 + static_cast<double>(nmax) * nmax));
    double tail_err = 0.0;
    for (int i = 0; i < 20; ++i) {
        tail_err = pref * c2mag * std::pow(T, -1.0 - h) / (h + 1.0);
        if (tail_err < 0.1 * tol) break;
        T *= 2.0;
    }
    std::vector<double> ine(nmax + 1);
    auto g = [&](double t) {
        bessel_ine(t, nmax, ine);
        double v = 1.0;
        for (int nj : offset) v *= ine[std::abs(nj)];
        return v;
    };
    const double coarse = panel_integrate(g, T, 24);
    const double fine = panel_integrate(g, T, 34);
    const double tail = pref * (std::pow(T, 1.0 - h) / (h - 1.0) + c1 * std::pow(T, -h) / h);
    const double err = std::abs(fine - coarse) + tail_err;
    if (err > tol) throw AccuracyError("green_offset: tolerance not reached", err);
    return fine + tail;
}

double brillouin_integrate(int d, const std::function<double(std::span<const double>)>& f,
                           double tol) {
    if (tol <= 0.0) throw DomainError("brillouin_integrate: tol must be positive");
    return zone_integrate<double>(d, f, tol, nullptr);
}

std::complex<double> brillouin_integrate_complex(
    int d, const std::function<std::complex<double>(std::span<const double>)>& f, double tol) {
    if (tol <= 0.0) throw DomainError("brillouin_integrate: tol must be positive");
    return zone_integrate<std::complex<double>>(d, f, tol, nullptr);
}

} // namespace qac
