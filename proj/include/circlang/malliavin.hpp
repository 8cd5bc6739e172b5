// The limiting Malliavin covariance matrix DU0(w), its determinant, the
// quadratic form psi(w,y,z) of the non-degenerate heat-kernel regime, and the
// affine rotation group action on target points.
//
// Matrix convention: m11 = Var(int sin(ws) B_s ds), m22 = Var(int cos(ws) B_s ds),
// m12 = Cov(-int sin.., int cos..) under the standard Brownian bridge B.
//
// The closed trig forms lose ~eps * w^-6 to cancellation near w = 0, so all
// entries switch to embedded even/odd Maclaurin series for |w| < 2 (exact
// rational coefficients; regeneration-tested against the closed forms in the
// overlap region).
#pragma once

#include <array>
#include <cmath>

#include "circlang/errors.hpp"

namespace circlang::malliavin {

struct TargetPoint {
    double w;  // fiber angle
    double y;
    double z;
};

struct MalliavinMatrix {
    double m11, m12, m22;
    double w;
    double det() const { return m11 * m22 - m12 * m12; }
    double quad(double v1, double v2) const {
        return m11 * v1 * v1 + 2.0 * m12 * v1 * v2 + m22 * v2 * v2;
    }
};

namespace detail {

inline constexpr double series_cutoff = 2.0;

// M11 = w^2 * sum c_k w^(2k)
inline constexpr std::array<double, 16> m11_c = {
    2.2222222222222222e-02, -3.1746031746031746e-03, 2.1164021164021164e-04,
    -8.5511196622307733e-06, 2.3492086984150476e-07, -4.6984173968300952e-09,
    7.1653424352528686e-11, -8.6199608243643532e-13, 8.3960657380172271e-15,
    -6.7601173413987336e-17, 4.5760794311006812e-19, -2.6413156889470021e-21,
    1.3155978527322233e-23, -5.7128939014426569e-26, 2.1821596262195023e-28,
    -7.3893236020131294e-31};

// M22 = sum c_k w^(2k)
inline constexpr std::array<double, 17> m22_c = {
    8.3333333333333333e-02, -2.5000000000000000e-02, 3.2242063492063492e-03,
    -2.1219135802469136e-04, 8.5552950136283470e-06, -2.3494381133270022e-07,
    4.6985129863767430e-09, -7.1653736736668057e-11, 8.6199690449995998e-13,
    -8.3960675173755056e-15, 6.7601176637462478e-17, -4.5760794806926065e-19,
    2.6413156955067806e-21, -1.3155978534862208e-23, 5.7128939022027351e-26,
    -2.1821596262872454e-28, 7.3893236020668938e-31};

// M12 = w * sum c_k w^(2k)
inline constexpr std::array<double, 16> m12_c = {
    -4.1666666666666667e-02, 9.7222222222222222e-03, -8.8458994708994709e-04,
    4.4918430335097002e-05, -1.4801620704398482e-06, 3.4455825626460547e-08,
    -5.9882071497481550e-10, 8.0812214934768277e-12, -8.7225813629008923e-14,
    7.7065341560115733e-16, -5.6784986312444390e-18, 3.5437652251875844e-20,
    -1.8974969041101645e-22, 8.8141791634419386e-25, -3.5860156525358787e-27,
    1.2885133031107170e-29};

// det(DU0) = w^2 * sum c_k w^(2k)
inline constexpr std::array<double, 14> det_c = {
    1.1574074074074074e-04, -9.9206349206349206e-06, 4.1335978835978836e-07,
    -1.0975209387907801e-08, 2.0733372667896477e-10, -2.9632759460801789e-12,
    3.3351469508494047e-14, -3.0420620872378396e-16, 2.2984415722826434e-18,
    -1.4637293681014465e-20, 7.9694873318113930e-23, -3.7541874598640330e-25,
    1.5456964058210349e-27, -5.6112676137626536e-30};

// Delta(w) = w^6 * sum c_k w^(2k)
inline constexpr std::array<double, 15> delta_c = {
    4.6296296296296296e-04, -3.9682539682539683e-05, 1.6534391534391534e-06,
    -4.3900837551631202e-08, 8.2933490671585910e-10, -1.1853103784320716e-11,
    1.3340587803397619e-13, -1.2168248348951358e-15, 9.1937662891305734e-18,
    -5.8549174724057861e-20, 3.1877949327245572e-22, -1.5016749839456132e-24,
    6.1827856232841395e-27, -2.2445070455050614e-29, 7.2395400165901862e-32};

template <std::size_t N>
inline double even_series(const std::array<double, N>& c, double w2) {
    double s = 0.0;
    for (std::size_t k = N; k-- > 0;) s = s * w2 + c[k];
    return s;
}

}  // namespace detail

// Limiting Malliavin covariance matrix DU0(w).
inline MalliavinMatrix du0(double w) {
    const double w2 = w * w;
    if (std::abs(w) < detail::series_cutoff) {
        return {w2 * detail::even_series(detail::m11_c, w2),
                w * detail::even_series(detail::m12_c, w2),
                detail::even_series(detail::m22_c, w2), w};
    }
    const double s = std::sin(w), c = std::cos(w), s2 = std::sin(2.0 * w);
    const double w3 = w2 * w, w4 = w2 * w2;
    const double m11 = (1.0 + s2 / (2.0 * w)) / (2.0 * w2) - s * s / w4;
    const double m22 = (1.0 - s2 / (2.0 * w)) / (2.0 * w2) - (1.0 - c) * (1.0 - c) / w4;
    const double m12 = s * s / (2.0 * w3) - (1.0 - c) * s / w4;
    return {m11, m12, m22, w};
}

// det(DU0) by its own closed form (independent of the entry route).
inline double du0_det_closed(double w) {
    const double w2 = w * w;
    if (std::abs(w) < detail::series_cutoff)
        return w2 * detail::even_series(detail::det_c, w2);
    const double s = std::sin(w), c = std::cos(w);
    const double w4 = w2 * w2, w6 = w4 * w2, w7 = w6 * w;
    return 1.0 / (4.0 * w4) - (4.0 * (1.0 - c) + s * s) / (4.0 * w6) + (1.0 - c) * s / w7;
}

// Delta(w) = 1 - (sin^2 w + 4(1-cos w))/w^2 + 4(1-cos w) sin w / w^3.
inline double delta(double w) {
    if (w == 0.0) throw domain_error("delta: w = 0 is the singular regime");
    const double w2 = w * w;
    if (std::abs(w) < detail::series_cutoff)
        return w2 * w2 * w2 * detail::even_series(detail::delta_c, w2);
    const double s = std::sin(w), c = std::cos(w);
    return 1.0 - (s * s + 4.0 * (1.0 - c)) / w2 + 4.0 * (1.0 - c) * s / (w2 * w);
}

namespace detail {

// The three coefficient functions of the expanded quadratic form; equal to
// 2 w^2 * (m22, m12, m11) but evaluated through their own printed trig forms
// above the cutoff so the expanded and bilinear routes stay distinct.
inline double coeff_yy(double w) {  // multiplies (sin w/w - y)^2
    if (std::abs(w) < series_cutoff)
        return 2.0 * w * w * even_series(m22_c, w * w);
    const double u = (1.0 - std::cos(w)) / w;
    return 1.0 - std::sin(2.0 * w) / (2.0 * w) - 2.0 * u * u;
}

inline double coeff_zz(double w) {  // multiplies ((1-cos w)/w - z)^2
    if (std::abs(w) < series_cutoff)
        return 2.0 * w * w * w * w * even_series(m11_c, w * w);
    const double u = std::sin(w) / w;
    return 1.0 + std::sin(2.0 * w) / (2.0 * w) - 2.0 * u * u;
}

inline double coeff_cross(double w) {  // multiplies -4 (sin w/w - y)((1-cos w)/w - z) ... /2
    if (std::abs(w) < series_cutoff)
        return 2.0 * w * w * w * even_series(m12_c, w * w);
    const double s = std::sin(w);
    return s * s / w - 2.0 * (1.0 - std::cos(w)) * s / (w * w);
}

}  // namespace detail

// psi(w,y,z): expanded three-term form.  Vanishes exactly at
// (y,z) = (sin w/w, (1-cos w)/w); strictly positive elsewhere.
inline double psi_quad(double w, double y, double z) {
    if (w == 0.0) throw domain_error("psi_quad: w = 0 is the singular regime");
    const double mu = std::sin(w) / w - y;
    const double lam = (1.0 - std::cos(w)) / w - z;
    return detail::coeff_yy(w) * mu * mu - 2.0 * detail::coeff_cross(w) * mu * lam
           + detail::coeff_zz(w) * lam * lam;
}

// Bilinear route: psi = 2 w^2 * v DU0 v^T with v = ((1-cos w)/w - z, y - sin w/w).
inline double psi_quad_bilinear(double w, double y, double z) {
    if (w == 0.0) throw domain_error("psi_quad_bilinear: w = 0");
    const MalliavinMatrix m = du0(w);
    const double v1 = (1.0 - std::cos(w)) / w - z;
    const double v2 = y - std::sin(w) / w;
    return 2.0 * w * w * m.quad(v1, v2);
}

// Polar route (y = rho cos(alpha), z = rho sin(alpha)).
inline double psi_quad_polar(double w, double rho, double alpha) {
    if (w == 0.0) throw domain_error("psi_quad_polar: w = 0");
    const double sw = std::sin(w) / w;
    const double cwt = (1.0 - std::cos(w)) / w;
    const double c2 = std::cos(w - 2.0 * alpha);
    return rho * rho * (1.0 - sw * c2 - 2.0 * cwt / w * (1.0 - c2))
           - 2.0 * rho * (1.0 - sw) * (std::sin(w - alpha) + std::sin(alpha)) / w
           + 2.0 * (1.0 - sw) * cwt / w;
}

// Affine rotation group: canonical coordinates of `target` seen from `start`.
inline TargetPoint homogenize(const TargetPoint& start, const TargetPoint& target) {
    const double dw = target.w - start.w;
    const double dy = target.y - start.y;
    const double dz = target.z - start.z;
    const double c = std::cos(start.w), s = std::sin(start.w);
    return {dw, dy * c + dz * s, dz * c - dy * s};
}

// The group composition used by the invariance tests: g acting on p.
inline TargetPoint group_apply(const TargetPoint& g, const TargetPoint& p) {
    const double c = std::cos(g.w), s = std::sin(g.w);
    return {g.w + p.w, g.y + p.y * c - p.z * s, g.z + p.y * s + p.z * c};
}

}  // namespace circlang::malliavin
