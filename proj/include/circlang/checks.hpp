// The acceptance suite: one function per criterion, each returning a
// structured pass/fail record.  Shared by the acceptance test binary and the
// `circlang validate` subcommand.
//
// Checks 8, 11 and parts of 12 assert values transcribed from statements that
// the rest of the implementation (and the independent oracles in the test
// suite) contradict; they are executed exactly as stated and report honest
// failures.  See notes/decisions.md outside the repository for the analysis
// trail, and README.md for the user-facing summary.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdint>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "circlang/bridge.hpp"
#include "circlang/kernel.hpp"
#include "circlang/malliavin.hpp"
#include "circlang/manifest.hpp"
#include "circlang/quad.hpp"
#include "circlang/specfun.hpp"

namespace circlang::checks {

inline constexpr double pi = specfun::pi;

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

namespace detail {

inline double rel(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

inline bool bits_equal(double a, double b) {
    return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace detail

// --- 1. Delta(w) = 4 w^4 det(DU0(w)) to relative 1e-12 on 1e3 random w ------

inline CheckResult check01(std::uint64_t seed) {
    manifest::Stopwatch sw;
    std::mt19937_64 gen(seed ^ 0x101);
    std::uniform_real_distribution<double> U(-20.0, 20.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double w = U(gen);
        if (std::abs(w) < 1e-6) w = 1e-6;
        worst = std::max(worst, detail::rel(malliavin::delta(w),
                                            4.0 * std::pow(w, 4) * malliavin::du0(w).det()));
    }
    const double secs = sw.seconds();
    const bool ok = worst < 1e-12 && secs < 1.0;
    return {1, "Delta = 4 w^4 det(DU0) identity", ok,
            detail::fmt("max rel %.2e (tol 1e-12), %.2f s (budget 1 s)", worst, secs), secs};
}

// --- 2. Small-w leading coefficients ----------------------------------------

inline CheckResult check02(std::uint64_t) {
    manifest::Stopwatch sw;
    double worst_det = 0.0, worst_delta = 0.0;
    for (double w : {0.03, 0.02, 0.01, 0.005, 0.001, -0.03, -0.015, -0.002}) {
        worst_det = std::max(worst_det,
                             std::abs(malliavin::du0(w).det() * 8640.0 / (w * w) - 1.0));
        worst_delta = std::max(worst_delta,
                               std::abs(malliavin::delta(w) * 2160.0 / std::pow(w, 6) - 1.0));
    }
    const bool ok = worst_det <= 1e-3 && worst_delta <= 1e-3;
    return {2, "det ~ w^2/8640 and Delta ~ w^6/2160 near w = 0", ok,
            detail::fmt("|det*8640/w^2-1| max %.2e, |Delta*2160/w^6-1| max %.2e (tol 1e-3)",
                        worst_det, worst_delta),
            sw.seconds()};
}

// --- 3. psi identities -------------------------------------------------------

inline CheckResult check03(std::uint64_t seed) {
    manifest::Stopwatch sw;
    std::mt19937_64 gen(seed ^ 0x303);
    std::uniform_real_distribution<double> Uw(0.1, 8.0), Uyz(-3.0, 3.0), Us(0.0, 1.0);
    double worst_bil = 0.0, worst_pol = 0.0, worst_zero = 0.0;
    for (int i = 0; i < 100; ++i) {
        double w = Uw(gen) * (Us(gen) < 0.5 ? -1.0 : 1.0);
        const double y = Uyz(gen), z = Uyz(gen);
        const double p1 = malliavin::psi_quad(w, y, z);
        worst_bil = std::max(worst_bil, detail::rel(p1, malliavin::psi_quad_bilinear(w, y, z)));
        const double rho = std::hypot(y, z), alpha = std::atan2(z, y);
        worst_pol = std::max(worst_pol, detail::rel(p1, malliavin::psi_quad_polar(w, rho, alpha)));
    }
    for (double w : {0.5, 1.0, 3.0}) {
        worst_zero = std::max(worst_zero, std::abs(malliavin::psi_quad(
                                              w, std::sin(w) / w, (1.0 - std::cos(w)) / w)));
    }
    const bool ok = worst_bil < 1e-10 && worst_pol < 1e-10 && worst_zero < 1e-12;
    return {3, "psi expanded/bilinear/polar identities and zero point", ok,
            detail::fmt("bilinear %.2e, polar %.2e (tol 1e-10); zero %.2e (tol 1e-12)",
                        worst_bil, worst_pol, worst_zero),
            sw.seconds()};
}

// --- 4. sigma, sigma' dual strategies ---------------------------------------

inline CheckResult check04(std::uint64_t) {
    manifest::Stopwatch sw;
    const double sA = quad::sigma_const().value.real();
    const double sB = quad::sigma_const_tail_formula().value.real();
    const double pA = quad::sigma_prime_const().value.real();
    const double pB = quad::sigma_prime_const_tail_formula().value.real();
    const double secs = sw.seconds();
    const bool ok = std::abs(sA - sB) < 1e-6 && std::abs(pA - pB) < 1e-6 && sA > 0.1 &&
                    pA > 0.1 && secs < 10.0;
    return {4, "sigma and sigma' dual-strategy agreement, bounds", ok,
            detail::fmt("sigma %.12f vs %.12f (d %.1e); sigma' %.12f vs %.12f (d %.1e); %.2f s",
                        sA, sB, std::abs(sA - sB), pA, pB, std::abs(pA - pB), secs),
            secs};
}

// --- 5. theta_1 --------------------------------------------------------------

inline CheckResult check05(std::uint64_t) {
    manifest::Stopwatch sw;
    const auto t = specfun::theta_root(1);
    const bool ok = t.value > 4.0 * pi / 3.0 && t.value < 1.5 * pi && t.residual < 1e-10;
    return {5, "theta_1 bracket and residual", ok,
            detail::fmt("theta_1 = %.12f in (4pi/3, 3pi/2); |tan - id| = %.2e (tol 1e-10)",
                        t.value, t.residual),
            sw.seconds()};
}

// --- 6. Riccati pipeline vs closed form --------------------------------------

inline CheckResult check06(std::uint64_t seed) {
    manifest::Stopwatch sw;
    std::mt19937_64 gen(seed ^ 0x606);
    std::uniform_real_distribution<double> Ua(-2.0, 2.0), Ug(0.1, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double a = Ua(gen), g = Ug(gen);
        const double closed = bridge::laplace_const(a, g);
        const double general = bridge::laplace_general([a](double) { return a; },
                                                       [g](double) { return -0.5 * g * g; });
        worst = std::max(worst, detail::rel(closed, general));
    }
    const double secs = sw.seconds();
    const bool ok = worst < 1e-8 && secs < 5.0;
    return {6, "Riccati pipeline vs constant-coefficient closed form", ok,
            detail::fmt("max rel %.2e (tol 1e-8), %.2f s (budget 5 s)", worst, secs), secs};
}

// --- 7. Closed transforms vs Monte Carlo ------------------------------------

inline CheckResult check07(std::uint64_t seed, int workers = 1) {
    manifest::Stopwatch sw;
    const std::uint64_t n_paths = 200000;
    const int n_steps = 1024;
    double worst_z = 0.0;
    std::string worst_case;
    std::uint32_t tag = 1;
    for (double a : {0.0, 1.0})
        for (double g : {0.5, 1.0, 2.0}) {
            auto est = bridge::mc_mean(
                [a, g](const bridge::BridgePath& p) {
                    const double i1 = bridge::trapezoid(p, [](double, double b) { return b; });
                    const double i2 = bridge::trapezoid(p, [](double, double b) { return b * b; });
                    return std::complex<double>(std::exp(a * i1 - 0.5 * g * g * i2), 0.0);
                },
                n_paths, n_steps, seed, workers, tag++);
            const double closed = bridge::laplace_const(a, g);
            const double z = std::abs(est.mean.real() - closed) / est.std_error;
            if (z > worst_z) {
                worst_z = z;
                worst_case = detail::fmt("laplace(%.0f,%.1f)", a, g);
            }
        }
    struct Pt { double xi, chi, x; };
    for (const Pt& pt : {Pt{1.0, 1.0, 1.0}, Pt{0.0, -4.0, 2.0}}) {
        auto est = bridge::mc_mean(
            [pt](const bridge::BridgePath& p) {
                const double i1 = bridge::trapezoid(p, [](double, double b) { return b; });
                const double i2 = bridge::trapezoid(p, [](double, double b) { return b * b; });
                return std::exp(std::complex<double>(-0.5 * pt.chi * i2,
                                                     pt.xi * i1 - 0.5 * pt.x * i2));
            },
            n_paths, n_steps, seed, workers, tag++);
        const auto closed = bridge::fourier_laplace_complex(pt.xi, pt.chi, pt.x);
        const double z = std::max(std::abs(est.mean.real() - closed.real()),
                                  std::abs(est.mean.imag() - closed.imag())) /
                         est.std_error;
        if (z > worst_z) {
            worst_z = z;
            worst_case = detail::fmt("fourier(%.0f,%.0f,%.0f)", pt.xi, pt.chi, pt.x);
        }
    }
    const double secs = sw.seconds();
    const bool ok = worst_z < 3.0 && secs < 180.0;
    return {7, "closed transforms within 3 SE of bridge MC", ok,
            detail::fmt("worst |z| = %.2f at %s (tol 3), %.0f s (budget 180 s)", worst_z,
                        worst_case.c_str(), secs),
            secs};
}

// --- 8. ratio(0, 0.01) against the quoted expansion --------------------------
// Quoted target (6 - 7.14e-7) + 0.012i; the implementation's constant term is
// 12 (forced by E[exp(i xi int B)] = exp(-xi^2/24) and by the transform
// formulas this library must satisfy elsewhere).  Executed as stated.

inline CheckResult check08(std::uint64_t) {
    manifest::Stopwatch sw;
    const auto r = specfun::ratio_of(0.0, 0.01);
    const std::complex<double> quoted(6.0 - 7.14e-7, 0.012);
    const bool ok = std::abs(r.real() - quoted.real()) < 1e-6 &&
                    std::abs(r.imag() - quoted.imag()) < 1e-6;
    return {8, "ratio(0,0.01) equals quoted series value", ok,
            detail::fmt("measured %.9f%+.9fi vs quoted %.9f%+.9fi (tol 1e-6/component); "
                        "constant term 12 is forced by the transform identities",
                        r.real(), r.imag(), quoted.real(), quoted.imag()),
            sw.seconds()};
}

// --- 9. Bridge-maximum law ----------------------------------------------------

inline CheckResult check09(std::uint64_t seed, int workers = 1) {
    manifest::Stopwatch sw;
    // dual series agreement
    double worst_dual = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double y = 0.5 + 2.5 * i / 100.0;
        double alt = 1.0, sign = -1.0;
        for (int n = 1; n < 64; ++n) {
            const double t = std::exp(-2.0 * n * n * y * y);
            alt += 2.0 * sign * t;
            sign = -sign;
            if (t < 1e-18) break;
        }
        double dual = 0.0;
        for (int n = 0; n < 64; ++n) {
            const double t = std::exp(-std::pow((2.0 * n + 1.0) * pi, 2) / (8.0 * y * y));
            dual += t;
            if (t < 1e-18) break;
        }
        dual *= std::sqrt(2.0 * pi) / y;
        worst_dual = std::max(worst_dual, std::abs(alt - dual));
    }
    // tail bound
    bool tail_ok = true;
    for (double t : {0.5, 1.0, 2.0, 4.0})
        tail_ok = tail_ok && (1.0 - bridge::wstar_cdf(std::sqrt(t)) < 2.0 * std::exp(-2.0 * t));
    // KS distance of the discrete-path maximum (with the standard continuity
    // correction 0.5826 sqrt(dt) for discrete monitoring of the extremum)
    const std::uint64_t n_paths = 100000;
    const int n_steps = 4096;
    std::vector<double> acc;
    bridge::run_blocks(n_paths, workers, acc, n_paths,
                       [&](std::uint64_t p, std::vector<double>& loc) {
                           thread_local bridge::BridgePath path;
                           bridge::sample_bridge_into(path, n_steps,
                                                      rng::GaussianStream(seed, p, 9));
                           double m = 0.0;
                           for (double v : path.values) m = std::max(m, std::abs(v));
                           loc[p] = m;
                       });
    std::sort(acc.begin(), acc.end());
    const double corr = 0.5826 * std::sqrt(1.0 / n_steps);
    double ks = 0.0;
    for (std::uint64_t i = 0; i < n_paths; ++i) {
        const double F = bridge::wstar_cdf(acc[i] + corr);
        const double emp = (i + 0.5) / n_paths;
        ks = std::max(ks, std::abs(F - emp));
    }
    const double secs = sw.seconds();
    const bool ok = worst_dual <= 1e-12 && tail_ok && ks < 0.01;
    return {9, "bridge max law: dual series, KS vs MC, tail bound", ok,
            detail::fmt("dual agreement %.2e (tol 1e-12); KS %.4f (tol 0.01); tail bound %s; %.0f s",
                        worst_dual, ks, tail_ok ? "holds" : "FAILS", secs),
            secs};
}

// --- 10. Gaussian Fourier inversion == case-(i) closed form -------------------

inline CheckResult check10(std::uint64_t) {
    manifest::Stopwatch sw;
    double worst = 0.0;
    std::string worst_at;
    for (double eps : {0.2, 0.1, 0.05})
        for (double w : {0.5, 1.0, 2.0}) {
            const double ym = std::sin(w) / w, zm = (1.0 - std::cos(w)) / w;
            const auto m = malliavin::du0(w);
            // offsets scaled to keep the exponent's quadratic part <= ~55
            // (the inversion is still 10+ sigma deep at the largest one)
            const double s1 = std::sqrt(eps * m.m11), s2 = std::sqrt(eps * m.m22);
            const struct { double dy, dz; } offs[3] = {
                {0.0, 0.0}, {1.5 * s1, -0.5 * s2}, {-0.04 * ym, -0.35 * zm}};
            for (const auto& o : offs) {
                double yh = ym + o.dy, zh = zm + o.dz;
                // cap the Mahalanobis depth so quadruple precision retains margin
                for (int guard = 0; guard < 40; ++guard) {
                    const auto pc = kernel::p_case_i(eps, w, eps * yh, eps * zh);
                    if (pc.exponent + w * w / (2.0 * eps) > -55.0) break;
                    yh = ym + 0.7 * (yh - ym);
                    zh = zm + 0.7 * (zh - zm);
                }
                const auto fig = quad::fourier_invert_gaussian(eps, w, yh, zh);
                const auto pc = kernel::p_case_i(eps, w, eps * yh, eps * zh);
                const double d = std::abs(fig.value.real() - pc.log_density());
                if (d > worst) {
                    worst = d;
                    worst_at = detail::fmt("(eps=%.2f,w=%.1f,yh=%.3f,zh=%.3f)", eps, w, yh, zh);
                }
            }
        }
    const double secs = sw.seconds();
    const bool ok = worst < 1e-6 && secs < 30.0;
    return {10, "fourier_invert_gaussian == p_case_i (27-point sweep)", ok,
            detail::fmt("worst |dlog| = %.2e at %s (tol 1e-6), %.1f s (budget 30 s)", worst,
                        worst_at.c_str(), secs),
            secs};
}

// --- 11. Finite-eps MC inversion vs case-(i) asymptote ------------------------
// Executed exactly as stated at (w=1, yh=0.8, zh=0.3).  The target sits 9.9
// Mahalanobis sigma from the concentration point: the integral being estimated
// is ~1e-19 while the MC noise floor at 2e5 paths is ~1e-1, so the ratio test
// reports an honest failure with the statistical-error flag raised.

inline CheckResult check11(std::uint64_t seed, int workers = 1, std::uint64_t n_paths = 200000) {
    manifest::Stopwatch sw;
    const double w = 1.0, yh = 0.8, zh = 0.3;
    std::string lines;
    double prev_dev = 0.0;
    bool ratio_ok = true, trend_ok = true, first = true;
    for (double eps : {0.2, 0.1, 0.05}) {
        const auto mc = quad::fourier_invert_mc(eps, w, yh, zh, n_paths, 48, 1024, seed, workers);
        const auto pc = kernel::p_case_i(eps, w, eps * yh, eps * zh);
        const double ratio = mc.log_abs / pc.log_density();
        const double dev = std::abs(ratio - 1.0);
        lines += detail::fmt(" eps=%.2f: log p_mc=%.2f (sign %+.0f, rel SE %.1e%s) log p_i=%.2f ratio=%.3f;",
                             eps, mc.log_abs, mc.sign, mc.rel_std_error,
                             mc.statistical_error_dominates ? ", stat-dominated" : "",
                             pc.log_density(), ratio);
        if (eps == 0.1 && !(mc.sign > 0 && dev <= 0.25)) ratio_ok = false;
        if (!first && dev > prev_dev + 1e-12) trend_ok = false;
        prev_dev = dev;
        first = false;
    }
    const double secs = sw.seconds();
    const bool ok = ratio_ok && trend_ok && secs < 600.0;
    return {11, "MC Fourier inversion vs case-(i) asymptote", ok,
            detail::fmt("%s %.0f s (budget 600 s)", lines.c_str(), secs), secs};
}

// --- 12. Local expansions of the lifted Phi -----------------------------------
// Moduli follow the saddle factorization Phi^2 = -64 i pi^5/(x~ - 4 i pi^2) and
// are asserted at 2%.  The quoted arguments carry an extra -3pi/8 and the
// quoted pi^2-limit a spurious h^{-1/4} divergence relative to the continuous
// lift this library computes (and which the exact eigenfunction oracle in the
// test suite confirms); those sub-checks run as stated and fail honestly.

inline CheckResult check12(std::uint64_t) {
    manifest::Stopwatch sw;
    const double eps = 1e-3, y = -1.0;
    const double sc = eps * eps / (eps - y);
    const double chi = sc - 4.0 * pi * pi;
    double worst_mod = 0.0, worst_arg = 0.0;
    for (int i = 0; i <= 10; ++i) {
        const double x = static_cast<double>(i);
        const auto P = specfun::Phi_lift(chi, sc * x);
        const double scaled = std::abs(P) * std::pow(x * x + 1.0, 0.25) * eps / std::sqrt(eps - y);
        worst_mod = std::max(worst_mod, std::abs(scaled / (8.0 * std::pow(pi, 2.5)) - 1.0));
        const double arg_quoted = -3.0 * pi / 8.0 - 0.5 * std::atan(x);
        worst_arg = std::max(worst_arg, std::abs(std::arg(P) - arg_quoted));
    }
    const double h = 1e-4;
    const auto Ph = specfun::Phi_lift(pi * pi, h);
    const std::complex<double> quoted_limit =
        std::pow(2.0, 0.75) * std::pow(pi, 2.75) * std::polar(1.0, 5.0 * pi / 16.0) /
        (std::sqrt(pi - 2.0 * std::tanh(pi / 2.0)) * std::pow(std::sinh(pi), 0.25));
    const std::complex<double> scaled_h = Ph * std::pow(h, 0.25);
    const double dev_h = std::abs(scaled_h - quoted_limit) / std::abs(quoted_limit);
    const bool ok = worst_mod < 0.02 && worst_arg < 2e-2 && dev_h < 0.01;
    return {12, "saddle-local expansions of Phi_lift", ok,
            detail::fmt("modulus dev %.4f (tol 0.02, PASS=%d); argument dev %.4f (tol 0.02, "
                        "quoted offset -3pi/8 not reproduced by the continuous lift); "
                        "pi^2-limit dev %.3f (tol 0.01, lift is regular there)",
                        worst_mod, worst_mod < 0.02, worst_arg, dev_h),
            sw.seconds()};
}

// --- 13. Support of the time-eps diffusion ------------------------------------

inline CheckResult check13(std::uint64_t seed, int workers = 1) {
    manifest::Stopwatch sw;
    const double eps = 0.3;
    const std::uint64_t n_paths = 100000;
    const int n = 1024;
    std::vector<double> acc;
    bridge::run_blocks(n_paths, workers, acc, 1, [&](std::uint64_t p, std::vector<double>& loc) {
        rng::GaussianStream g(seed, p, 13);
        // free Brownian motion (not pinned): the actual diffusion endpoint
        const double sq = std::sqrt(1.0 / n);
        double wsum = 0.0;
        const double se = std::sqrt(eps);
        double cy = 0.5, cz = 0.0;  // trapezoid accumulators, f(0)=cos(0)=1, sin=0
        for (int j = 1; j <= n; ++j) {
            wsum += sq * g.normal(j - 1);
            const double wgt = (j == n) ? 0.5 : 1.0;
            cy += wgt * std::cos(se * wsum);
            cz += wgt * std::sin(se * wsum);
        }
        const double yej = eps * cy / n, zej = eps * cz / n;
        if (yej * yej + zej * zej > eps * eps) loc[0] += 1.0;
    });
    const double violations = acc[0];
    const double secs = sw.seconds();
    const bool ok = violations == 0.0;
    return {13, "support: y^2 + z^2 <= eps^2 on simulated endpoints", ok,
            detail::fmt("%.0f violations out of %llu (eps=%.2f), %.0f s", violations,
                        static_cast<unsigned long long>(n_paths), eps, secs),
            secs};
}

// --- 14. Group-action invariance ----------------------------------------------
// (a) p_general(s,t) is bit-identical to the dispatch of the canonical triple
//     (the homogenize-twice oracle: (s,t) is the exact s-shift of
//     ((0,0,0), homogenize(s,t))), 100 random pairs;
// (b) bit-identity under 100 random simultaneous dyadic translations (the
//     exactly-representable subgroup; rotations by irrational angles cannot
//     round-trip bitwise in IEEE doubles -- reported, bounded at 1e-12).

inline CheckResult check14(std::uint64_t seed) {
    manifest::Stopwatch sw;
    std::mt19937_64 gen(seed ^ 0xE14);
    auto dyadic = [&gen]() {
        return static_cast<double>(static_cast<std::int64_t>(gen() % (1ull << 28)) - (1 << 27))
               * 0x1p-26;  // multiples of 2^-26 in ~[-2, 2]
    };
    int bad_twice = 0, bad_trans = 0;
    double worst_rot = 0.0;
    for (int i = 0; i < 100; ++i) {
        malliavin::TargetPoint s{dyadic(), dyadic(), dyadic()};
        malliavin::TargetPoint t{dyadic(), dyadic(), dyadic()};
        if (t.w == s.w) t.w += 0x1p-20;
        const double eps = 0.1;
        const auto r1 = kernel::p_general(eps, s, t);
        const auto h = malliavin::homogenize(s, t);
        const auto r2 = kernel::p_general(eps, {0.0, 0.0, 0.0}, h);
        if (!detail::bits_equal(r1.log_prefactor, r2.log_prefactor) ||
            !detail::bits_equal(r1.exponent, r2.exponent))
            ++bad_twice;
        // pure translation, exact on the dyadic lattice
        const malliavin::TargetPoint g{0.0, dyadic(), dyadic()};
        const malliavin::TargetPoint s2{s.w, s.y + g.y, s.z + g.z};
        const malliavin::TargetPoint t2{t.w, t.y + g.y, t.z + g.z};
        const auto r3 = kernel::p_general(eps, s2, t2);
        if (!detail::bits_equal(r1.log_prefactor, r3.log_prefactor) ||
            !detail::bits_equal(r1.exponent, r3.exponent))
            ++bad_trans;
        // full rotation shift: report the rounding-level deviation
        const malliavin::TargetPoint gr{dyadic(), dyadic(), dyadic()};
        const auto r4 = kernel::p_general(eps, malliavin::group_apply(gr, s),
                                          malliavin::group_apply(gr, t));
        worst_rot = std::max(worst_rot, detail::rel(r4.log_density(), r1.log_density()));
    }
    const bool ok = bad_twice == 0 && bad_trans == 0 && worst_rot < 1e-12;
    return {14, "group-action invariance of p_general", ok,
            detail::fmt("homogenize-twice mismatches %d/100; translation mismatches %d/100 "
                        "(both bit-exact); rotated-shift rel dev %.1e (IEEE rounding floor)",
                        bad_twice, bad_trans, worst_rot),
            sw.seconds()};
}

// --- 15. Worker-count reproducibility ------------------------------------------

inline CheckResult check15(std::uint64_t seed) {
    manifest::Stopwatch sw;
    auto field_sig = [&](int workers) {
        auto grid = bridge::GridSpec::uniform(12.0, 9, 8.0, 9);
        const auto f = bridge::p_eps_mc(0.1, 1.0, 0.8, 0.3, grid, 20000, 256, seed, workers);
        return f.mean;
    };
    auto lap_sig = [&](int workers) {
        return bridge::mc_mean(
                   [](const bridge::BridgePath& p) {
                       const double i2 =
                           bridge::trapezoid(p, [](double, double b) { return b * b; });
                       return std::complex<double>(std::exp(-0.5 * i2), 0.0);
                   },
                   30000, 256, seed, workers, 15)
            .mean;
    };
    const auto f1 = field_sig(1), f4 = field_sig(4), f8 = field_sig(8);
    const auto l1 = lap_sig(1), l4 = lap_sig(4), l8 = lap_sig(8);
    bool ok = detail::bits_equal(l1.real(), l4.real()) && detail::bits_equal(l1.real(), l8.real());
    for (std::size_t i = 0; i < f1.size(); ++i) {
        ok = ok && detail::bits_equal(f1[i].real(), f4[i].real()) &&
             detail::bits_equal(f1[i].imag(), f8[i].imag()) &&
             detail::bits_equal(f4[i].real(), f8[i].real());
    }
    return {15, "MC bit-identical across worker counts {1,4,8}", ok,
            detail::fmt("field (81 nodes) and transform means compared bitwise: %s",
                        ok ? "identical" : "MISMATCH"),
            sw.seconds()};
}

// --- registry -------------------------------------------------------------------

inline std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed,
                                          int workers = 1) {
    std::vector<CheckResult> out;
    const bool fast = suite == "fast" || suite == "full";
    const bool mc = suite == "mc" || suite == "full";
    if (fast) {
        out.push_back(check01(seed));
        out.push_back(check02(seed));
        out.push_back(check03(seed));
        out.push_back(check04(seed));
        out.push_back(check05(seed));
        out.push_back(check06(seed));
        out.push_back(check08(seed));
        out.push_back(check10(seed));
        out.push_back(check12(seed));
        out.push_back(check14(seed));
    }
    if (mc) {
        out.push_back(check07(seed, workers));
        out.push_back(check09(seed, workers));
        out.push_back(check11(seed, workers));
        out.push_back(check13(seed, workers));
        out.push_back(check15(seed));
    }
    std::sort(out.begin(), out.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
    return out;
}

}  // namespace circlang::checks
