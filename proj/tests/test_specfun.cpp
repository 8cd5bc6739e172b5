#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "circlang/quad.hpp"
#include "circlang/specfun.hpp"

using namespace circlang;
using Catch::Approx;
using std::complex;

namespace {
constexpr double pi = specfun::pi;

// adaptive quadrature shared by the oracle checks below
double oracle_quad(const std::function<double(double)>& f, double lo, double hi,
                   double tol = 1e-12) {
    long ev = 0;
    bool conv = false;
    return quad::detail::gk_adaptive(f, lo, hi, tol, ev, conv);
}
}  // namespace

TEST_CASE("sqrt_halfplane: stated values and square identity", "[specfun]") {
    auto r1 = specfun::sqrt_halfplane(1.0, 0.0);
    CHECK(r1.a == Approx(1.0).margin(1e-15));
    CHECK(r1.b == Approx(0.0).margin(1e-15));
    auto r2 = specfun::sqrt_halfplane(0.0, 2.0);
    CHECK(r2.a == Approx(1.0).epsilon(1e-14));
    CHECK(r2.b == Approx(1.0).epsilon(1e-14));
    auto r3 = specfun::sqrt_halfplane(-pi * pi, 0.0);
    CHECK(r3.a == Approx(0.0).margin(1e-15));
    CHECK(r3.b == Approx(pi).epsilon(1e-15));
    CHECK_THROWS_AS(specfun::sqrt_halfplane(0.0, 0.0), domain_error);

    // (a+ib)^2 = chi + ix to 1e-12 relative, including the cancellation regime
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> Uc(-50.0, 50.0), Ux(0.0, 50.0);
    for (int i = 0; i < 500; ++i) {
        const double chi = Uc(gen), x = Ux(gen) * std::pow(10.0, -3.0 * (i % 4));
        if (chi == 0.0 && x == 0.0) continue;
        const auto [a, b] = specfun::sqrt_halfplane(chi, x);
        const complex<double> sq = complex<double>(a, b) * complex<double>(a, b);
        CHECK(std::abs(sq - complex<double>(chi, x)) <= 1e-12 * std::hypot(chi, x));
        CHECK(a * a - b * b == Approx(chi).margin(1e-12 * std::hypot(chi, x)));
        CHECK(2.0 * a * b == Approx(x).margin(1e-12 * std::hypot(chi, x)));
    }
}

TEST_CASE("sinh_lift: boundary values and the defining integral", "[specfun]") {
    auto v = specfun::sinh_lift(1.0, 0.0);
    CHECK(v.modulus == Approx(std::sinh(1.0)).epsilon(1e-15));
    CHECK(v.argument == Approx(0.0).margin(1e-15));
    for (int k = 1; k <= 3; ++k) {
        auto lk = specfun::sinh_lift(1.0, k * pi / 2.0);
        CHECK(lk.argument == Approx(k * pi / 2.0).margin(1e-12));
    }
    // argument equals int_0^b sinh(2a)/(cosh 2a - cos 2beta) dbeta
    const double a = 0.7, b = 2.3;
    const double arg = specfun::sinh_lift(a, b).argument;
    const double quadv = oracle_quad(
        [a](double beta) { return std::sinh(2.0 * a) / (std::cosh(2.0 * a) - std::cos(2.0 * beta)); },
        0.0, b);
    CHECK(arg == Approx(quadv).margin(1e-10));
}

TEST_CASE("sinh_lift agrees with complex sinh modulo 2 pi", "[specfun]") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> Ua(0.05, 4.0), Ub(0.0, 20.0);
    for (int i = 0; i < 200; ++i) {
        const double a = Ua(gen), b = Ub(gen);
        const auto lift = specfun::sinh_lift(a, b);
        const complex<double> direct = std::sinh(complex<double>(a, b));
        CHECK(lift.modulus == Approx(std::abs(direct)).epsilon(1e-12));
        const double d = std::remainder(lift.argument - std::arg(direct), 2.0 * pi);
        CHECK(std::abs(d) < 1e-10);
    }
}

TEST_CASE("f and ratio: real reductions and the pole guard", "[specfun]") {
    CHECK(specfun::f_of(1.0, 0.0).real() == Approx(1.0 - std::tanh(0.5) / 0.5).epsilon(1e-14));
    CHECK(specfun::f_of(1.0, 0.0).imag() == Approx(0.0).margin(1e-15));
    CHECK(specfun::f_of(pi * pi, 0.0).real()
          == Approx(1.0 - 2.0 / pi * std::tanh(pi / 2.0)).epsilon(1e-14));
    for (double x : {0.5, 1.0, 2.0, 3.5})
        CHECK(specfun::f_of(-4.0 * x * x, 0.0).real()
              == Approx(1.0 - std::tanh(x) / x).epsilon(1e-12));

    // ratio(0,x) series point: constant term 12 (forced by the transform
    // identities; the quoted 6+... variant is exercised in the acceptance run)
    const auto r = specfun::ratio_of(0.0, 0.01);
    CHECK(r.real() == Approx(12.0 + 1e-4 / 700.0).margin(1e-9));
    CHECK(r.imag() == Approx(0.012).margin(1e-9));

    // series-direct agreement across the 1e-2 boundary
    for (double x : {0.002, 0.005, 0.009}) {
        const auto rs = specfun::ratio_of(0.0, x);
        const complex<double> rd = complex<double>(0.0, x) / specfun::f_of(0.0, x);
        CHECK(std::abs(rs - rd) < 2e-9 * std::abs(rd));
    }

    // positive real and imaginary parts on x > 0
    for (double x = 0.05; x < 60.0; x *= 1.7) {
        const auto v = specfun::ratio_of(0.0, x);
        CHECK(v.real() > 0.0);
        CHECK(v.imag() > 0.0);
    }

    const double th1 = specfun::theta1();
    CHECK_THROWS_AS(specfun::ratio_of(-4.0 * th1 * th1, 1e-13), pole_error);
}

TEST_CASE("phi: limits, piecewise x=0 values, derivative self-consistency", "[specfun]") {
    CHECK(specfun::phi_of(0.0, 1e-10) == Approx(0.0).margin(1e-10));
    // phi(chi, 0) = 0 on both sides of sqrt(-chi) = pi/2
    CHECK(specfun::phi_of(-1.0, 0.0) == Approx(0.0).margin(1e-14));     // sqrt = 1 < pi/2
    CHECK(specfun::phi_of(-6.25, 0.0) == Approx(0.0).margin(1e-14));    // 2.5 in (pi/2, pi)
    CHECK(specfun::phi_of(-16.0, 0.0) == Approx(-pi / 2.0).margin(1e-14));  // 4 in (pi, 3pi/2)
    CHECK_THROWS_AS(specfun::phi_of(-pi * pi / 4.0, 0.0), domain_error);

    // central finite difference of phi_of matches itself at x = 1
    const double h = 1e-5;
    const double fd = (specfun::phi_of(0.0, 1.0 + h) - specfun::phi_of(0.0, 1.0 - h)) / (2.0 * h);
    const double h2 = 2e-5;
    const double fd2 =
        (specfun::phi_of(0.0, 1.0 + h2) - specfun::phi_of(0.0, 1.0 - h2)) / (2.0 * h2);
    CHECK(fd == Approx((4.0 * fd - fd2) / 3.0).margin(1e-7));
    // and the closed derivative of the continuous lift (half the half-sum form)
    const double t = std::sqrt(2.0);
    const double closed = -(1.0 / (4.0 * t)) * (std::sinh(t) - std::sin(t))
                          / (std::cosh(t) - std::cos(t));
    CHECK(fd == Approx(closed).margin(1e-7));
}

TEST_CASE("theta roots", "[specfun]") {
    const auto t1 = specfun::theta_root(1);
    CHECK(t1.value > 4.0 * pi / 3.0);
    CHECK(t1.value < 1.5 * pi);
    CHECK(t1.value == Approx(4.493409458).margin(1e-8));
    CHECK(t1.residual < 1e-10);
    const auto t2 = specfun::theta_root(2);
    CHECK(t2.value > 1.5 * pi);
    CHECK(t2.value < 2.5 * pi);
    CHECK(t2.residual < 1e-10);
}

TEST_CASE("Phi on the axis: small-x limit, tail envelope, assembly routes", "[specfun]") {
    // x -> 0+: ratio -> 12, bracket -> 1, phi -> 0: Phi -> sqrt(24 pi)
    CHECK(std::abs(specfun::Phi_axis(1e-9)) == Approx(std::sqrt(24.0 * pi)).epsilon(1e-9));

    // envelope |Phi| <= c x exp(-sqrt(x/8)), c fitted on [50,150], tested at 200
    double c_fit = 0.0;
    for (double x = 50.0; x <= 150.0; x += 10.0)
        c_fit = std::max(c_fit, std::abs(specfun::Phi_axis(x))
                                    / (x * std::exp(-std::sqrt(x / 8.0))));
    CHECK(std::abs(specfun::Phi_axis(200.0))
          <= c_fit * 200.0 * std::exp(-std::sqrt(200.0 / 8.0)));

    // independent assembly: sqrt_halfplane + sinh_lift + f_of pipeline
    const double x = 1.0;
    const auto [a, b] = specfun::sqrt_halfplane(0.0, x);
    const auto sl = specfun::sinh_lift(a, b);
    const double phi = 0.5 * std::atan2(b, a) - 0.5 * sl.argument;
    const double bracket = std::sqrt(std::hypot(a, b) / sl.modulus);
    const complex<double> root =
        std::sqrt(2.0 * pi * complex<double>(0.0, x) / specfun::f_of(0.0, x));
    const complex<double> assembled = std::polar(bracket, phi) * root;
    CHECK(std::abs(assembled - specfun::Phi_axis(x)) < 1e-12 * std::abs(assembled));
}

TEST_CASE("Phi_lift: axis consistency and frozen continuation oracles", "[specfun]") {
    for (double x : {0.5, 1.0, 5.0}) {
        const auto lift = specfun::Phi_lift(0.0, x);
        const auto axis = specfun::Phi_axis(x);
        CHECK(std::abs(lift - axis) < 1e-9 * std::abs(axis));
    }
    // frozen values from a 30-digit path-tracked continuation oracle
    struct Pt { double chi, x; complex<double> val; };
    const Pt pts[] = {
        {-5.0, 2.0, {10.2808496, -0.736552541}},
        {-20.0, 1.0, {19.1597246, -0.943716737}},
        {-30.0, 0.5, {35.1357232, -1.37800417}},
        {5.0, 2.0, {7.36798752, -0.462565577}},
        {9.8696, 1.0, {6.36324983, -0.189401729}},
        {-60.0, 1.5, {-1.62177822, -61.6421241}},
    };
    for (const auto& p : pts) {
        const auto v = specfun::Phi_lift(p.chi, p.x);
        CHECK(std::abs(v - p.val) < 2e-8 * std::abs(p.val));
    }
}

TEST_CASE("lift continuity along parameter grids", "[specfun]") {
    // fixed x, chi sweep across the spike at -pi^2
    double prev = std::arg(specfun::Phi_lift(0.0, 0.8));
    double prev_unwrapped = prev;
    for (double chi = -0.5; chi > -35.0; chi -= 0.5) {
        const auto v = specfun::Phi_lift(chi, 0.8);
        const double phase = std::arg(v);
        const double step = std::remainder(phase - prev, 2.0 * pi);
        CHECK(std::abs(step) < pi / 2.0);
        prev = phase;
        prev_unwrapped += step;
    }
    // fixed chi, x sweep
    prev = std::arg(specfun::Phi_lift(-15.0, 0.1));
    for (double x = 0.2; x < 12.0; x += 0.1) {
        const double phase = std::arg(specfun::Phi_lift(-15.0, x));
        CHECK(std::abs(std::remainder(phase - prev, 2.0 * pi)) < pi / 2.0);
        prev = phase;
    }
    const double th1 = specfun::theta1();
    CHECK_THROWS_AS(specfun::Phi_lift(-4.0 * th1 * th1 - 1.0, 1.0), branch_error);
    CHECK_THROWS_AS(specfun::Phi_lift(-4.0 * pi * pi, 0.0), branch_error);
}
