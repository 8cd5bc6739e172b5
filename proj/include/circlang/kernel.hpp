// Regime classification and the three small-time log-density asymptotes of
// the circular Langevin heat kernel, all assembled in log space (exponents
// reach -1e4 at small eps; nothing here exponentiates internally).
#pragma once

#include <cmath>
#include <string>

#include "circlang/errors.hpp"
#include "circlang/malliavin.hpp"
#include "circlang/quad.hpp"

namespace circlang::kernel {

inline constexpr double pi = specfun::pi;

enum class Regime { NonDegenerate, DegenerateAxis, DegenerateGeneric };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::NonDegenerate: return "NonDegenerate";
        case Regime::DegenerateAxis: return "DegenerateAxis";
        default: return "DegenerateGeneric";
    }
}

// w compared to zero exactly; callers wanting the singular regimes must pass
// w = 0 explicitly.
inline Regime classify(const malliavin::TargetPoint& p) {
    if (p.w != 0.0) return Regime::NonDegenerate;
    if (p.z == 0.0 && p.y <= 0.0) return Regime::DegenerateAxis;
    return Regime::DegenerateGeneric;
}

struct LogDensityAsymptote {
    Regime regime;
    double log_prefactor;  // log of the non-exponential factor, eps powers included
    double exponent;       // leading exponential argument (<= 0 for admissible inputs)
    double epsilon;

    double log_density() const { return log_prefactor + exponent; }
};

// Non-degenerate case (w != 0):
//   p = w^2/(pi eps^3 sqrt(2 pi eps Delta(w)))
//       * exp[-(w^2/eps)(1/2 + psi(w, y/eps, z/eps)/Delta(w))].
inline LogDensityAsymptote p_case_i(double eps, double w, double y, double z) {
    if (w == 0.0) throw domain_error("p_case_i: w = 0 belongs to the degenerate regimes");
    if (!(eps > 0.0)) throw domain_error("p_case_i: eps > 0 required");
    const double D = malliavin::delta(w);
    const double psi = malliavin::psi_quad(w, y / eps, z / eps);
    LogDensityAsymptote out;
    out.regime = Regime::NonDegenerate;
    out.log_prefactor = std::log(w * w)
                        - std::log(pi) - 3.0 * std::log(eps)
                        - 0.5 * std::log(2.0 * pi * eps * D);
    out.exponent = -(w * w / eps) * (0.5 + psi / D);
    out.epsilon = eps;
    return out;
}

// First degenerate case (w = 0, z = 0, y <= 0):
//   p = 2 sqrt(2) e sigma / (eps^3 sqrt(eps - y)) * exp[-4 pi^2 (eps - y)/eps^2].
inline LogDensityAsymptote p_case_ii(double eps, double y) {
    if (y > 0.0) throw domain_error("p_case_ii: requires y <= 0");
    if (!(eps > 0.0)) throw domain_error("p_case_ii: eps > 0 required");
    LogDensityAsymptote out;
    out.regime = Regime::DegenerateAxis;
    out.exponent = -4.0 * pi * pi * (eps - y) / (eps * eps);
    out.log_prefactor = std::log(2.0 * std::sqrt(2.0)) + 1.0 + std::log(quad::sigma_value())
                        - 3.0 * std::log(eps) - 0.5 * std::log(eps - y);
    out.epsilon = eps;
    return out;
}

// C_eps(y,z) of the second degenerate case.
inline double c_eps(double eps, double y, double z) {
    const double lam = pi - 2.0 * std::tanh(pi / 2.0);
    return pi * z * z / (2.0 * lam * eps * eps * eps) + (y - eps) / (eps * eps);
}

// Second degenerate case (w = 0, z != 0 or y > 0):
//   p = (2 pi/sinh pi)^{1/4} sigma' / (sqrt(pi - 2 tanh(pi/2)) eps^4 C^{3/4})
//       * exp[-pi^2 C_eps(y,z)].
inline LogDensityAsymptote p_case_iii(double eps, double y, double z) {
    if (z == 0.0 && y <= 0.0)
        throw domain_error("p_case_iii: (z = 0, y <= 0) belongs to the first degenerate case");
    if (!(eps > 0.0)) throw domain_error("p_case_iii: eps > 0 required");
    const double C = c_eps(eps, y, z);
    if (!(C > 0.0))
        throw domain_error("p_case_iii: C_eps <= 0 (outside the formula's validity)");
    LogDensityAsymptote out;
    out.regime = Regime::DegenerateGeneric;
    out.exponent = -pi * pi * C;
    const double lam = pi - 2.0 * std::tanh(pi / 2.0);
    out.log_prefactor = 0.25 * std::log(2.0 * pi / std::sinh(pi)) + std::log(quad::sigma_prime_value())
                        - 0.5 * std::log(lam) - 4.0 * std::log(eps) - 0.75 * std::log(C);
    out.epsilon = eps;
    return out;
}

inline LogDensityAsymptote dispatch(double eps, const malliavin::TargetPoint& p) {
    switch (classify(p)) {
        case Regime::NonDegenerate: return p_case_i(eps, p.w, p.y, p.z);
        case Regime::DegenerateAxis: return p_case_ii(eps, p.y);
        default: return p_case_iii(eps, p.y, p.z);
    }
}

// Homogenize, classify, dispatch.  Invariant under the simultaneous group
// translation of start and target (bit-identical when the shifted inputs are
// exact, i.e. for translations; see the acceptance notes).
inline LogDensityAsymptote p_general(double eps, const malliavin::TargetPoint& start,
                                     const malliavin::TargetPoint& target) {
    return dispatch(eps, malliavin::homogenize(start, target));
}

// Remark-2.4 support ball: endpoints of the time-eps diffusion satisfy
// y^2 + z^2 <= eps^2; the asymptotes are meaningless outside it.
inline bool support_indicator(double eps, double y, double z) {
    return y * y + z * z <= eps * eps;
}

}  // namespace circlang::kernel
