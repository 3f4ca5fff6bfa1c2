#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "pks/multipliers.hpp"

// Independent long-double reference for the multipliers and a cancellation-free central
// difference: atan(a) - atan(b) = atan((a - b) / (1 + a b)) when a b > -1.

namespace pks::test {

using Real = long double;
inline constexpr Real kPiL = 3.141592653589793238462643383279502884L;

inline bool band(Real k, Real iota) { return k != 0 && k * k * iota <= 1 + 1e-12L; }

inline Real rate(Real k, Real iota) { return std::cbrt(iota) * std::cbrt(std::fabs(k) * std::fabs(k)); }

// arguments of the two arctan factors; 0 when the indicator is off
inline Real arg_iota(Real t, Real k, Real eta, Real iota) {
    return band(k, iota) ? rate(k, iota) * (t - eta / k) : 0;
}
inline Real arg_cal(Real t, Real k, Real eta) { return k != 0 ? t - eta / k : 0; }

inline Real W_iota_ref(Real t, Real k, Real eta, Real iota) { return kPiL - std::atan(arg_iota(t, k, eta, iota)); }
inline Real W_cal_ref(Real t, Real k, Real eta) { return kPiL - std::atan(arg_cal(t, k, eta)); }
inline Real M_ref(Real t, Real k, Real eta, Real iota) { return W_iota_ref(t, k, eta, iota) * W_cal_ref(t, k, eta); }

inline Real atan_diff(Real a, Real b) {
    const Real d = std::atan((a - b) / (1 + a * b));
    if (a * b > -1) return d;
    return d + (a > 0 ? kPiL : -kPiL);
}

enum class Variable { t, eta };

/// (M(x + h) - M(x - h)) / (2h) for x = t or eta, evaluated without subtractive cancellation.
inline Real central_difference(Variable var, Real t, Real k, Real eta, Real iota, Real h = 1e-6L) {
    auto shifted = [&](Real s, Real& wi, Real& wc, Real& ai, Real& ac) {
        const Real tt = var == Variable::t ? t + s : t;
        const Real ee = var == Variable::eta ? eta + s : eta;
        ai = arg_iota(tt, k, ee, iota);
        ac = arg_cal(tt, k, ee);
        wi = kPiL - std::atan(ai);
        wc = kPiL - std::atan(ac);
    };
    Real wip, wcp, aip, acp, wim, wcm, aim, acm;
    shifted(h, wip, wcp, aip, acp);
    shifted(-h, wim, wcm, aim, acm);
    const Real dwi = -atan_diff(aip, aim);
    const Real dwc = -atan_diff(acp, acm);
    return (wip * dwc + wcm * dwi) / (2 * h);
}

struct DerivativeCheck {
    long samples = 0;
    long failures = 0;
    double worst_dt = 0.0;    // worst relative error of dt_M_iota
    double worst_deta = 0.0;  // worst relative error of deta_M_iota
    double worst_value = 0.0; // worst relative gap between M_iota and the reference
};

/// Compares the analytic derivatives against central differences on random points with
/// t in [0, t_max], integer 0 < |k| <= k_max, |eta| <= eta_max.
inline DerivativeCheck check_derivatives(long samples, std::uint64_t seed, double tol = 1e-6, double t_max = 200.0,
                                         int k_max = 64, double eta_max = 256.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(0.0, t_max), ue(-eta_max, eta_max), unear(-3.0, 3.0);
    std::uniform_int_distribution<int> uk(1, k_max), usign(0, 1), upick(0, 3);
    const double iotas[] = {1.0, 0.1, 0.01, 1e-3};
    DerivativeCheck out;
    for (long n = 0; n < samples; ++n) {
        const double k = uk(rng) * (usign(rng) ? 1.0 : -1.0);
        const double eta = ue(rng);
        double t = ut(rng);
        if (n % 2 == 1) t = std::clamp(eta / k + unear(rng), 0.0, t_max);  // near the critical time
        const double iota = iotas[upick(rng)];
        const MultiplierSpec spec{iota, iota, kDeltaMax, 0};

        const double dt = dt_M_iota(t, k, eta, spec);
        const double de = deta_M_iota(t, k, eta, spec);
        const Real fd_t = central_difference(Variable::t, t, k, eta, iota);
        const Real fd_e = central_difference(Variable::eta, t, k, eta, iota);
        const double et = static_cast<double>(std::fabs((dt - fd_t) / fd_t));
        const double ee = static_cast<double>(std::fabs((de - fd_e) / fd_e));
        const Real m_ref = M_ref(t, k, eta, iota);
        const double ev = static_cast<double>(std::fabs((M_iota(t, k, eta, spec) - m_ref) / m_ref));
        out.worst_dt = std::max(out.worst_dt, et);
        out.worst_deta = std::max(out.worst_deta, ee);
        out.worst_value = std::max(out.worst_value, ev);
        if (!(et <= tol && ee <= tol && ev <= 1e-12)) ++out.failures;
        ++out.samples;
    }
    return out;
}

}  // namespace pks::test
