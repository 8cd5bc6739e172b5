// Brownian-bridge machinery: exact sampling on a uniform grid, the closed
// Laplace/Fourier transforms of quadratic bridge functionals, the general
// Riccati-pipeline transform, Monte-Carlo estimators of the pinned Fourier
// field P_eps, and the law of the bridge maximum.
//
// Monte-Carlo contract: all estimators are keyed by (seed, n_paths, n_steps)
// through counter-based per-path substreams, accumulated over fixed path
// blocks that are reduced in index order, so results are bit-identical for
// any worker count.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "circlang/errors.hpp"
#include "circlang/malliavin.hpp"
#include "circlang/rng.hpp"
#include "circlang/specfun.hpp"

namespace circlang::bridge {

using std::complex;
inline constexpr double pi = specfun::pi;

// ---------------------------------------------------------------------------
// Exact bridge sampling.
// ---------------------------------------------------------------------------

struct BridgePath {
    int n_steps;
    std::vector<double> values;  // length n_steps+1, values[0] = values[n] = 0
};

// Random walk pinned at the right end; the grid marginals have exactly
// Cov(B_s, B_t) = s(1-t), s <= t.
inline void sample_bridge_into(BridgePath& path, int n_steps, const rng::GaussianStream& g) {
    path.n_steps = n_steps;
    path.values.resize(n_steps + 1);
    const double sq = std::sqrt(1.0 / n_steps);
    double acc = 0.0;
    path.values[0] = 0.0;
    for (int j = 1; j <= n_steps; ++j) {
        acc += sq * g.normal(j - 1);
        path.values[j] = acc;
    }
    const double endpoint = acc;
    for (int j = 1; j < n_steps; ++j)
        path.values[j] -= (static_cast<double>(j) / n_steps) * endpoint;
    path.values[n_steps] = 0.0;
}

inline BridgePath sample_bridge(int n_steps, std::uint64_t seed, std::uint64_t path_index,
                                std::uint32_t stream_tag = 0) {
    if (n_steps < 2) throw domain_error("sample_bridge: n_steps >= 2 required");
    BridgePath p;
    sample_bridge_into(p, n_steps, rng::GaussianStream(seed, path_index, stream_tag));
    return p;
}

// Trapezoid integral of f(s_j, B_j) over the path grid.
template <typename F>
inline double trapezoid(const BridgePath& p, F&& f) {
    const int n = p.n_steps;
    const double h = 1.0 / n;
    double acc = 0.5 * (f(0.0, p.values[0]) + f(1.0, p.values[n]));
    for (int j = 1; j < n; ++j) acc += f(j * h, p.values[j]);
    return acc * h;
}

// ---------------------------------------------------------------------------
// Closed-form transforms.
// ---------------------------------------------------------------------------

// E[exp(int alpha*B - (gamma^2/2) B^2)] = sqrt(gamma/sinh gamma)
//   * exp[(alpha^2/gamma^3)(gamma/2 - tanh(gamma/2))].
inline double laplace_const(double alpha, double gamma) {
    if (gamma < 0.0) throw domain_error("laplace_const: gamma >= 0 required");
    if (gamma < 1e-5) {
        // gamma/2 - tanh(gamma/2) = g^3/24 - g^5/240 + ...
        const double g2 = gamma * gamma;
        const double frac = 1.0 / 24.0 - g2 / 240.0;
        const double root = 1.0 - g2 / 12.0 + 7.0 * g2 * g2 / 1440.0;
        return root * std::exp(alpha * alpha * frac);
    }
    const double root = std::sqrt(gamma / std::sinh(gamma));
    return root * std::exp(alpha * alpha / (gamma * gamma * gamma)
                           * (gamma / 2.0 - std::tanh(gamma / 2.0)));
}

// E[exp(beta int B^2)] for beta < pi^2/2: sqrt(g/sin g) with g = sqrt(2 beta).
inline double laplace_imaginary(double beta) {
    if (beta >= pi * pi / 2.0)
        throw domain_error("laplace_imaginary: beta >= pi^2/2 (abscissa of convergence)");
    if (beta == 0.0) return 1.0;
    if (beta < 0.0) return laplace_const(0.0, std::sqrt(-2.0 * beta));
    const double g = std::sqrt(2.0 * beta);
    return std::sqrt(g / std::sin(g));
}

// ---------------------------------------------------------------------------
// General transform through the Riccati/linear-ODE pipeline.
//
// E[exp(int (alpha_s B + gamma_s B^2) ds)] with gamma <= 0, via u'' = -2 gamma u,
// u(0)=1, u'(0)=0 (so u >= 1), g = -u'/u, and exp(int_tau^s g) = u(tau)/u(s):
//   E = sqrt(u(1)/C) * exp(A - B^2/(2C)),
//   A = (1/2) int I(s)^2 ds,  I(s) = (1/u(s)) int_s^1 u a,
//   B = u(1) int I(s)/u(s) ds,  C = u(1)^2 int u^-2 ds.
// ---------------------------------------------------------------------------

struct RiccatiSolution {
    std::vector<double> grid, u, uprime;
};

inline RiccatiSolution solve_riccati_u(const std::function<double(double)>& gamma_fn, int n) {
    RiccatiSolution out;
    out.grid.resize(n + 1);
    out.u.resize(n + 1);
    out.uprime.resize(n + 1);
    const double h = 1.0 / n;
    double u = 1.0, v = 0.0;
    out.grid[0] = 0.0;
    out.u[0] = u;
    out.uprime[0] = v;
    auto acc = [&gamma_fn](double s, double uu) { return -2.0 * gamma_fn(s) * uu; };
    for (int i = 0; i < n; ++i) {
        const double s = i * h;
        const double k1u = v, k1v = acc(s, u);
        const double k2u = v + 0.5 * h * k1v, k2v = acc(s + 0.5 * h, u + 0.5 * h * k1u);
        const double k3u = v + 0.5 * h * k2v, k3v = acc(s + 0.5 * h, u + 0.5 * h * k2u);
        const double k4u = v + h * k3v, k4v = acc(s + h, u + h * k3u);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        out.grid[i + 1] = (i + 1) * h;
        out.u[i + 1] = u;
        out.uprime[i + 1] = v;
        if (u <= 0.0) throw validity_error("riccati: u reached zero (gamma must be <= 0)");
    }
    return out;
}

namespace detail {

// Composite Simpson over an even grid.
inline double simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size() - 1;           // even by construction
    double acc = f[0] + f[n];
    for (std::size_t j = 1; j < n; j += 2) acc += 4.0 * f[j];
    for (std::size_t j = 2; j < n; j += 2) acc += 2.0 * f[j];
    return acc * h / 3.0;
}

// Backward cumulative of int_s^1 f by per-pair Simpson (grid size even).
inline std::vector<double> backward_cumulative(const std::vector<double>& f, double h) {
    const std::size_t n = f.size() - 1;
    std::vector<double> J(n + 1, 0.0);
    for (std::size_t j = n; j >= 2; j -= 2)
        J[j - 2] = J[j] + h / 3.0 * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
    // odd nodes: single-interval quadratic rules consistent with the pairs
    for (std::size_t j = 1; j + 2 <= n; j += 2)
        J[j] = J[j + 1] + h / 12.0 * (5.0 * f[j] + 8.0 * f[j + 1] - f[j + 2]);
    if (n >= 2)
        J[n - 1] = h / 12.0 * (-f[n - 2] + 8.0 * f[n - 1] + 5.0 * f[n]);
    return J;
}

}  // namespace detail

inline double laplace_general(const std::function<double(double)>& alpha_fn,
                              const std::function<double(double)>& gamma_fn, int n = 4096) {
    if (n % 2) ++n;
    const auto sol = solve_riccati_u(gamma_fn, n);
    const double h = 1.0 / n;
    std::vector<double> ua(n + 1), I(n + 1), Iu(n + 1), invu2(n + 1), I2(n + 1);
    for (int j = 0; j <= n; ++j) ua[j] = sol.u[j] * alpha_fn(sol.grid[j]);
    const auto J = detail::backward_cumulative(ua, h);
    for (int j = 0; j <= n; ++j) {
        I[j] = J[j] / sol.u[j];
        I2[j] = I[j] * I[j];
        Iu[j] = I[j] / sol.u[j];
        invu2[j] = 1.0 / (sol.u[j] * sol.u[j]);
    }
    const double u1 = sol.u[n];
    const double A = 0.5 * detail::simpson(I2, h);
    const double B = u1 * detail::simpson(Iu, h);
    const double C = u1 * u1 * detail::simpson(invu2, h);
    return std::sqrt(u1 / C) * std::exp(A - B * B / (2.0 * C));
}

// ---------------------------------------------------------------------------
// E[exp(int (i xi B - (chi + i x)/2 B^2))]: the complex-parameter closed form.
// ---------------------------------------------------------------------------

inline complex<double> fourier_laplace_complex(double xi, double chi, double x) {
    if (!(chi > -pi * pi)) throw domain_error("fourier_laplace_complex: chi <= -pi^2");
    if (!(x > 0.0)) throw domain_error("fourier_laplace_complex: x > 0 required");
    const auto [a, b] = specfun::sqrt_halfplane(chi, x);
    const double r = std::hypot(chi, x);
    const double bracket =
        std::pow(2.0 * r / specfun::cosh_minus_cos(2.0 * a, 2.0 * b), 0.25);
    const double phi = specfun::phi_of(chi, x);
    const complex<double> f = specfun::f_of(chi, x);
    return std::polar(bracket, phi)
           * std::exp(-xi * xi / 2.0 * f / complex<double>(chi, x));
}

// ---------------------------------------------------------------------------
// The Gaussian identity: E[exp(int u_s B_s ds)] for deterministic complex u.
// ---------------------------------------------------------------------------

inline complex<double> gauss_linear(const std::function<complex<double>(double)>& u_fn,
                                    int n = 8192) {
    if (n % 2) ++n;
    const double h = 1.0 / n;
    std::vector<double> fre(n + 1), fim(n + 1);
    for (int j = 0; j <= n; ++j) {
        const auto v = u_fn(j * h);
        fre[j] = v.real();
        fim[j] = v.imag();
    }
    const auto Jre = detail::backward_cumulative(fre, h);
    const auto Jim = detail::backward_cumulative(fim, h);
    std::vector<double> q_re(n + 1), q_im(n + 1);
    for (int j = 0; j <= n; ++j) {
        q_re[j] = Jre[j] * Jre[j] - Jim[j] * Jim[j];
        q_im[j] = 2.0 * Jre[j] * Jim[j];
    }
    const complex<double> intJ2(detail::simpson(q_re, h), detail::simpson(q_im, h));
    const complex<double> intJ(detail::simpson(Jre, h), detail::simpson(Jim, h));
    return std::exp(0.5 * (intJ2 - intJ * intJ));
}

// exp(-1/2 [xi'^2 m11 + 2 xi' xi m12 + xi^2 m22]): the limiting characteristic
// functional E[exp(i int (xi cos(ws) - xi' sin(ws)) B_s ds)].
inline double e0_gaussian(double xi_p, double xi, double w) {
    const auto m = malliavin::du0(w);
    return std::exp(-0.5 * (m.m11 * xi_p * xi_p + 2.0 * m.m12 * xi_p * xi + m.m22 * xi * xi));
}

// ---------------------------------------------------------------------------
// Deterministic parallel reduction over path blocks.
// ---------------------------------------------------------------------------

struct MCEstimate {
    complex<double> mean;
    double std_error;
    std::uint64_t n_paths;
    std::uint64_t seed;
};

inline constexpr std::uint64_t mc_block = 4096;

// Evaluates `per_path(path_index, out_accumulator)` over fixed blocks; the
// per-block partial sums are combined in block order regardless of workers.
template <typename PerPath>
inline void run_blocks(std::uint64_t n_paths, int workers, std::vector<double>& acc,
                       std::size_t acc_len, PerPath&& per_path) {
    const std::uint64_t n_blocks = (n_paths + mc_block - 1) / mc_block;
    std::vector<std::vector<double>> partial(n_blocks);
    std::vector<std::thread> pool;
    if (workers < 1) workers = 1;
    auto work = [&](int tid) {
        for (std::uint64_t blk = tid; blk < n_blocks; blk += workers) {
            std::vector<double> local(acc_len, 0.0);
            const std::uint64_t lo = blk * mc_block;
            const std::uint64_t hi = std::min(n_paths, lo + mc_block);
            for (std::uint64_t p = lo; p < hi; ++p) per_path(p, local);
            partial[blk] = std::move(local);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        for (int t = 0; t < workers; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    acc.assign(acc_len, 0.0);
    for (std::uint64_t blk = 0; blk < n_blocks; ++blk)
        for (std::size_t i = 0; i < acc_len; ++i) acc[i] += partial[blk][i];
}

// ---------------------------------------------------------------------------
// Monte-Carlo estimate of a complex path functional mean.
// ---------------------------------------------------------------------------

template <typename Functional>
inline MCEstimate mc_mean(Functional&& fn, std::uint64_t n_paths, int n_steps,
                          std::uint64_t seed, int workers = 1, std::uint32_t tag = 0) {
    std::vector<double> acc;
    run_blocks(n_paths, workers, acc, 4, [&](std::uint64_t p, std::vector<double>& loc) {
        thread_local BridgePath path;
        sample_bridge_into(path, n_steps, rng::GaussianStream(seed, p, tag));
        const complex<double> v = fn(path);
        loc[0] += v.real();
        loc[1] += v.imag();
        loc[2] += v.real() * v.real() + v.imag() * v.imag();
        loc[3] += 1.0;
    });
    const double n = acc[3];
    const complex<double> mean(acc[0] / n, acc[1] / n);
    const double var = std::max(0.0, acc[2] / n - std::norm(mean));
    return {mean, std::sqrt(var / n), n_paths, seed};
}

// ---------------------------------------------------------------------------
// The pinned Fourier field P_eps on a product grid (common random numbers).
// ---------------------------------------------------------------------------

struct GridSpec {
    std::vector<double> xi_p;  // nodes pairing the cos/y direction
    std::vector<double> xi;    // nodes pairing the sin/z direction

    static GridSpec uniform(double half_width_p, int n_p, double half_width, int n) {
        GridSpec g;
        g.xi_p.resize(n_p);
        g.xi.resize(n);
        for (int i = 0; i < n_p; ++i)
            g.xi_p[i] = -half_width_p + 2.0 * half_width_p * i / (n_p - 1);
        for (int i = 0; i < n; ++i) g.xi[i] = -half_width + 2.0 * half_width * i / (n - 1);
        return g;
    }
};

struct FieldEstimate {
    GridSpec grid;
    std::vector<complex<double>> mean;  // row-major [i_p * nxi + i]
    std::vector<double> std_error;
    std::uint64_t n_paths;
    std::uint64_t seed;
};

// P_eps(xi',xi) = E exp(i/sqrt(eps) (xi' [int cos(ws + sqrt(eps) B) - y]
//                                  + xi  [int sin(ws + sqrt(eps) B) - z])).
inline FieldEstimate p_eps_mc(double eps, double w, double y, double z, const GridSpec& grid,
                              std::uint64_t n_paths, int n_steps = 1024,
                              std::uint64_t seed = 0, int workers = 1) {
    const std::size_t np = grid.xi_p.size(), nx = grid.xi.size();
    const std::size_t nodes = np * nx;
    const double rse = 1.0 / std::sqrt(eps);
    std::vector<double> acc;
    run_blocks(n_paths, workers, acc, 2 * nodes + 1, [&](std::uint64_t p, std::vector<double>& loc) {
        thread_local BridgePath path;
        thread_local std::vector<complex<double>> up, vx;
        sample_bridge_into(path, n_steps, rng::GaussianStream(seed, p));
        const double se = std::sqrt(eps);
        const double ic = trapezoid(path, [&](double s, double b) { return std::cos(w * s + se * b); });
        const double is = trapezoid(path, [&](double s, double b) { return std::sin(w * s + se * b); });
        const double alpha = (ic - y) * rse;
        const double beta = (is - z) * rse;
        up.resize(np);
        vx.resize(nx);
        for (std::size_t i = 0; i < np; ++i) up[i] = std::polar(1.0, grid.xi_p[i] * alpha);
        for (std::size_t i = 0; i < nx; ++i) vx[i] = std::polar(1.0, grid.xi[i] * beta);
        for (std::size_t i = 0; i < np; ++i)
            for (std::size_t j = 0; j < nx; ++j) {
                const complex<double> v = up[i] * vx[j];
                loc[2 * (i * nx + j)] += v.real();
                loc[2 * (i * nx + j) + 1] += v.imag();
            }
        loc[2 * nodes] += 1.0;
    });
    FieldEstimate out;
    out.grid = grid;
    out.mean.resize(nodes);
    out.std_error.resize(nodes);
    const double n = acc[2 * nodes];
    for (std::size_t k = 0; k < nodes; ++k) {
        out.mean[k] = complex<double>(acc[2 * k] / n, acc[2 * k + 1] / n);
        // |e^{i phi}| = 1: per-node variance of the complex mean <= (1 - |m|^2)/n
        out.std_error[k] = std::sqrt(std::max(0.0, 1.0 - std::norm(out.mean[k])) / n);
    }
    out.n_paths = n_paths;
    out.seed = seed;
    return out;
}

// ---------------------------------------------------------------------------
// Law of the bridge maximum  M = max |B|.
// ---------------------------------------------------------------------------

// P(M < y): alternating series for y >= 0.8, Jacobi-dual series below.
inline double wstar_cdf(double y) {
    if (y <= 0.0) return 0.0;
    if (y >= 0.8) {
        double s = 1.0, sign = -1.0;
        for (int n = 1; n < 64; ++n) {
            const double t = std::exp(-2.0 * n * n * y * y);
            s += 2.0 * sign * t;
            sign = -sign;
            if (t < 1e-15) break;
        }
        return std::min(1.0, std::max(0.0, s));
    }
    double s = 0.0;
    for (int n = 0; n < 64; ++n) {
        const double t = std::exp(-(2.0 * n + 1.0) * (2.0 * n + 1.0) * pi * pi / (8.0 * y * y));
        s += t;
        if (t < 1e-15) break;
    }
    return std::sqrt(2.0 * pi) / y * s;
}

}  // namespace circlang::bridge
