// Complex special functions with explicit continuous branch lifts:
// the half-plane square root (a,b), the lifted complex sinh, the transform
// factor f(chi,x) and ratio(chi,x) = (chi+ix)/f, the phase phi(chi,x), the
// oscillatory-integral kernel Phi on the axis and its analytic lift
// Phi(chi,x) = Phi(x - i*chi), and the positive roots of tan(t) = t.
//
// Conventions. z := sqrt(chi + i x) = a + i b (principal, x >= 0), and all
// objects are continuations in x~ = x - i*chi of their real-axis values:
//   Phi(x~) = sqrt(z/sinh z) * sqrt(2 pi z^2 / f(z)),  f(z) = 1 - tanh(z/2)/(z/2),
// each square root lifted continuously from the axis determination.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "circlang/errors.hpp"

namespace circlang::specfun {

inline constexpr double pi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// sqrt_halfplane: (a + i b)^2 = chi + i x with a,b >= 0.
// ---------------------------------------------------------------------------

struct SqrtDecomp {
    double a;  // real part
    double b;  // imaginary part
};

// Cancellation-safe: the smaller of a,b is recovered from 2ab = x.
inline SqrtDecomp sqrt_halfplane(double chi, double x) {
    if (chi == 0.0 && x == 0.0)
        throw domain_error("sqrt_halfplane: (0,0) not allowed");
    if (x < 0.0)
        throw domain_error("sqrt_halfplane: requires x >= 0");
    const double r = std::hypot(chi, x);
    if (chi >= 0.0) {
        const double a = std::sqrt((r + chi) / 2.0);
        return {a, a > 0.0 ? x / (2.0 * a) : 0.0};
    }
    const double b = std::sqrt((r - chi) / 2.0);
    return {b > 0.0 ? x / (2.0 * b) : 0.0, b};
}

// ---------------------------------------------------------------------------
// LiftedComplex and the lifted sinh.
// ---------------------------------------------------------------------------

struct LiftedComplex {
    double modulus;   // >= 0
    double argument;  // continuous lift, NOT reduced mod 2*pi

    std::complex<double> value() const {
        return std::polar(modulus, argument);
    }
};

// phi_a(b): continuous argument of sinh(a+ib), a > 0.  Closed piecewise form
// k*pi + atan(coth(a) tan(b - k*pi)) with k the nearest integer to b/pi;
// exact half-integer boundaries take the known value k*pi/2.
inline double sinh_arg(double a, double b) {
    if (!(a > 0.0)) throw domain_error("sinh_arg: requires a > 0");
    const double halves = b / (pi / 2.0);
    const double rh = std::round(halves);
    if (halves == rh && std::fmod(rh, 2.0) != 0.0)
        return rh * (pi / 2.0);  // b = k*pi +- pi/2 exactly
    const double k = std::round(b / pi);
    const double t = std::tan(b - k * pi);
    return k * pi + std::atan(t / std::tanh(a));
}

inline LiftedComplex sinh_lift(double a, double b) {
    const double mod = std::hypot(std::sinh(a) * std::cos(b), std::cosh(a) * std::sin(b));
    return {mod, sinh_arg(a, b)};
}

// ---------------------------------------------------------------------------
// Stable trig/hyperbolic combinations (sums of squares, no cancellation).
// ---------------------------------------------------------------------------

inline double cosh_minus_cos(double a, double b) {
    const double sa = std::sinh(a / 2.0), sb = std::sin(b / 2.0);
    return 2.0 * (sa * sa + sb * sb);
}

inline double cosh_plus_cos(double a, double b) {
    const double sa = std::sinh(a / 2.0), cb = std::cos(b / 2.0);
    return 2.0 * (sa * sa + cb * cb);
}

// ---------------------------------------------------------------------------
// f(chi,x) = 1 - tanh(z/2)/(z/2) and ratio = (chi + i x)/f.
// ---------------------------------------------------------------------------

namespace detail {

// ratio(0,x) Maclaurin series; radius of use 1e-2 (validated against the
// direct route in the tests).
inline std::complex<double> ratio_axis_series(double x) {
    const std::complex<double> i(0.0, 1.0);
    return 12.0 + i * (1.2 * x) + x * x * (1.0 / 700.0) - i * (x * x * x / 63000.0)
           - std::pow(x, 4) * (37.0 / 1.9404e8) + i * std::pow(x, 5) * (59.0 / 2.52252e10)
           + std::pow(x, 6) * (2753.0 / 9.5351256e13) - i * std::pow(x, 7) * (827.0 / 2.31567336e15);
}

}  // namespace detail

inline std::complex<double> f_of(double chi, double x) {
    const auto [a, b] = sqrt_halfplane(chi, x);
    if (a > 350.0) {  // tanh(z/2) == 1 to double precision
        return 1.0 - 2.0 / std::complex<double>(a, b);
    }
    const double denom = (a * a + b * b) * cosh_plus_cos(a, b) / 2.0;
    if (std::abs(denom) < 1e-140)
        throw pole_error("f_of: cosh(a) + cos(b) vanishes");
    const double sha = std::sinh(a), sinb = std::sin(b), cha_s = a * sha + b * sinb;
    return 1.0 - std::complex<double>(cha_s, a * sinb - b * sha) / denom;
}

// ratio(chi,x) = (chi + i x)/f(chi,x); series branch on the axis.
inline std::complex<double> ratio_of(double chi, double x) {
    if (chi == 0.0 && x < 1e-2) return detail::ratio_axis_series(x);
    const std::complex<double> f = f_of(chi, x);
    const double scaled = std::abs(f) * std::hypot(chi, x);
    if (scaled < 1e-10)
        throw pole_error("ratio_of: too close to a pole of (chi+ix)/f");
    return std::complex<double>(chi, x) / f;
}

// ---------------------------------------------------------------------------
// phi(chi,x): the lifted phase of sqrt(z / sinh z).
// ---------------------------------------------------------------------------

inline double phi_of(double chi, double x) {
    if (x < 0.0) throw domain_error("phi_of: requires x >= 0");
    if (chi == 0.0 && x == 0.0) return 0.0;
    if (x == 0.0) {
        if (chi > 0.0) return 0.0;
        // chi < 0: z = i*sqrt(-chi); piecewise-constant limit between the
        // branch boundaries sqrt(-chi) in pi/2 + pi*N.
        const double b = std::sqrt(-chi);
        const double k = std::round(b / pi);
        const double frac = b - k * pi;
        if (std::abs(std::abs(frac) - pi / 2.0) < 1e-12)
            throw domain_error("phi_of: x = 0 on a branch boundary");
        const double lim = k * pi + (frac > 0.0 ? pi / 2.0 : -pi / 2.0);
        return 0.5 * (pi / 2.0) - 0.5 * lim;
    }
    const auto [a, b] = sqrt_halfplane(chi, x);
    return 0.5 * std::atan2(b, a) - 0.5 * sinh_arg(a, b);
}

// ---------------------------------------------------------------------------
// theta_root: positive roots of tan(t) = t (poles of i x / f(0,x) at 4 i t^2).
// ---------------------------------------------------------------------------

struct ThetaRoot {
    int index;       // k >= 1
    double value;    // in ((2k-1) pi/2, (2k+1) pi/2)
    double residual; // |tan(value) - value|
};

inline ThetaRoot theta_root(int k) {
    if (k < 1) throw domain_error("theta_root: requires k >= 1");
    // sin(t) - t cos(t) has the same roots and no poles; bracket [k pi, (2k+1) pi/2].
    auto g = [](double t) { return std::sin(t) - t * std::cos(t); };
    double lo = k * pi, hi = (2.0 * k + 1.0) * pi / 2.0;
    double glo = g(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double gm = g(mid);
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    const double t = 0.5 * (lo + hi);
    return {k, t, std::abs(std::tan(t) - t)};
}

inline double theta1() {
    static const double v = theta_root(1).value;
    return v;
}

// ---------------------------------------------------------------------------
// Phi on the axis: Phi(x) = e^{i phi(0,x)} [2x/(cosh s - cos s)]^{1/4}
//                  sqrt(2 pi ratio(0,x)),  s = sqrt(2x).
// ---------------------------------------------------------------------------

namespace detail {

// |z/sinh z|^2 on the axis = 2x/(cosh sqrt(2x) - cos sqrt(2x)); series below 1e-2.
inline double bracket_axis(double x) {
    if (x < 1e-2)
        return 1.0 - x * x / 90.0 + std::pow(x, 4) * (13.0 / 113400.0)
               - std::pow(x, 6) * (4009.0 / 3.405402e9);
    const auto [a, b] = sqrt_halfplane(0.0, x);
    return 2.0 * x / cosh_minus_cos(2.0 * a, 2.0 * b);
}

// phi(0,x) series (odd); used only for the tiny-x argument of Phi_axis.
inline double phi_axis_series(double x) {
    return -x / 12.0 + x * x * x / 5670.0 - std::pow(x, 5) / 935550.0;
}

}  // namespace detail

inline std::complex<double> Phi_axis(double x) {
    if (!(x > 0.0)) throw domain_error("Phi_axis: requires x > 0");
    const double phi = (x < 1e-4) ? detail::phi_axis_series(x) : phi_of(0.0, x);
    const double bracket = std::pow(detail::bracket_axis(x), 0.25);
    const std::complex<double> R = ratio_of(0.0, x);
    // arg(ratio(0,x)) lies in [0, pi/2]; the principal square root is the lift.
    return std::polar(bracket, phi) * std::sqrt(2.0 * pi * R);
}

// ---------------------------------------------------------------------------
// The lifted Phi(chi, x) = Phi(x - i chi) for chi > -4 theta_1^2, x >= 0.
// ---------------------------------------------------------------------------

namespace detail {

// Integrand of the chi-lift of arg(ratio): d(arg 1/f)/d(chi) without the
// -x/(2(chi^2+x^2)) part (that piece integrates to arctan in closed form).
inline double tilde_arg_integrand(double c, double x) {
    const auto [a, b] = sqrt_halfplane(c, x);
    const double r = std::hypot(c, x);
    const double cpc = cosh_plus_cos(a, b);
    const double cmc = cosh_minus_cos(a, b);
    const double sha = std::sinh(a), sinb = std::sin(b);
    const double T = a * sha + b * sinb;
    const double Btil = r * cpc - 4.0 * T + 4.0 * cmc;
    const double num = (b * sha - a * sinb) * (T - cmc);
    return num / (r * cpc * Btil);
}

// Adaptive Simpson with graded refinement; the integrand has Lorentzian
// spikes of width ~x at c = -(2k+1)^2 pi^2 where cosh(a)+cos(b) ~ 0.
inline double adaptive_segment(const std::function<double(double)>& fn, double lo, double hi,
                               double f_lo, double f_hi, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = fn(mid);
    const double s2 = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
    const double m1 = 0.5 * (lo + mid), m2 = 0.5 * (mid + hi);
    const double f_m1 = fn(m1), f_m2 = fn(m2);
    const double s4 = (hi - lo) / 12.0 * (f_lo + 4.0 * f_m1 + 2.0 * f_mid + 4.0 * f_m2 + f_hi);
    if (depth <= 0 || std::abs(s4 - s2) < 15.0 * tol) return s4 + (s4 - s2) / 15.0;
    return adaptive_segment(fn, lo, mid, f_lo, f_mid, tol / 2.0, depth - 1)
         + adaptive_segment(fn, mid, hi, f_mid, f_hi, tol / 2.0, depth - 1);
}

inline double adaptive_quad(const std::function<double(double)>& fn,
                            const std::vector<double>& pts, double tol) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i] == pts[i + 1]) continue;
        total += adaptive_segment(fn, pts[i], pts[i + 1], fn(pts[i]), fn(pts[i + 1]),
                                  tol / static_cast<double>(pts.size()), 48);
    }
    return total;
}

}  // namespace detail

// tilde-phi(chi,x): lifted argument of ratio(chi,x) continued in chi from the
// axis value arg(ratio(0,x)) in [0, pi/2].
inline double phi_tilde(double chi, double x) {
    const double x_eff = std::max(x, 1e-9);  // continuous limit at x = 0
    const double arg0 = std::arg(ratio_of(0.0, x_eff));
    double integral = 0.0;
    if (chi != 0.0) {
        // Breakpoints graded into the spike centers -(2k+1)^2 pi^2.
        const double lo = std::min(chi, 0.0), hi = std::max(chi, 0.0);
        std::vector<double> pts{lo, hi};
        for (int k = 0; k < 4; ++k) {
            const double s = -(2.0 * k + 1.0) * (2.0 * k + 1.0) * pi * pi;
            if (s <= lo || s >= hi) continue;
            for (double wdt = 4.0; wdt >= x_eff * 0.5; wdt *= 0.25) {
                if (s - wdt > lo) pts.push_back(s - wdt);
                if (s + wdt < hi) pts.push_back(s + wdt);
            }
            pts.push_back(s);
        }
        std::sort(pts.begin(), pts.end());
        auto fn = [x_eff](double c) { return detail::tilde_arg_integrand(c, x_eff); };
        integral = detail::adaptive_quad(fn, pts, 1e-10);
        if (chi < 0.0) integral = -integral;
    }
    return arg0 - 1.5 * std::atan2(chi, x) + integral;
}

// The analytic lift of Phi.  Modulus sqrt(2 pi) (a^2+b^2) (cosh a - cos b)^{-1/4}
// / Btil^{1/4}; phase phi(chi,x) + phi_tilde(chi,x)/2.
inline std::complex<double> Phi_lift(double chi, double x) {
    if (x < 0.0) throw domain_error("Phi_lift: requires x >= 0");
    const double th1 = theta1();
    if (chi <= -4.0 * th1 * th1 + 1e-6)
        throw branch_error("Phi_lift: chi at or below -4 theta_1^2");
    if (x < 1e-9) {
        for (int k = 1; k <= 3; ++k) {
            if (std::abs(chi + 4.0 * k * k * pi * pi) < 1e-6)
                throw branch_error("Phi_lift: denominator zero at chi = -4 k^2 pi^2, x = 0");
        }
        if (std::abs(chi + 4.0 * th1 * th1) < 1e-6)
            throw branch_error("Phi_lift: denominator zero at chi = -4 theta_1^2, x = 0");
    }
    const auto [a, b] = sqrt_halfplane(chi, x);
    const double r = std::hypot(chi, x);
    const double cmc = cosh_minus_cos(a, b);
    const double Btil = r * cosh_plus_cos(a, b)
                        - 4.0 * (a * std::sinh(a) + b * std::sin(b)) + 4.0 * cmc;
    if (Btil <= 0.0)
        throw branch_error("Phi_lift: nonpositive lift denominator");
    const double mod = std::sqrt(2.0 * pi) * r / (std::pow(cmc, 0.25) * std::pow(Btil, 0.25));
    const double phase = phi_of(chi, x) + 0.5 * phi_tilde(chi, x);
    return std::polar(mod, phase);
}

}  // namespace circlang::specfun
