#include "pks/multipliers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pks {

void MultiplierSpec::validate() const {
    if (!(iota > 0.0 && iota <= 1.0)) throw std::invalid_argument("multiplier iota must lie in (0, 1]");
    if (!(kappa > 0.0 && kappa <= 1.0)) throw std::invalid_argument("multiplier kappa must lie in (0, 1]");
    if (!(delta > 0.0 && delta <= kDeltaMax * (1.0 + 1e-12)))
        throw std::invalid_argument("delta must lie in (0, 1/(16 pi^2)], got " + std::to_string(delta));
    if (s < 0) throw std::invalid_argument("regularity level s must be >= 0");
}

bool in_band(double k, double iota) { return k != 0.0 && k * k * iota <= 1.0 + 1e-12; }

namespace {

// iota^{1/3} |k|^{2/3}
double band_rate(double k, double iota) { return std::cbrt(iota * k * k); }

}  // namespace

double W_iota(double t, double k, double eta, double iota) {
    if (!in_band(k, iota)) return kPi;
    return kPi - std::atan(band_rate(k, iota) * (t - eta / k));
}

double W_cal(double t, double k, double eta) {
    if (k == 0.0) return kPi;
    return kPi - std::atan(t - eta / k);
}

double M_iota(double t, double k, double eta, const MultiplierSpec& spec) {
    return W_iota(t, k, eta, spec.iota) * W_cal(t, k, eta);
}

double A_iota(double t, double k, double eta, const MultiplierSpec& spec) {
    const double growth = std::exp(spec.delta * band_rate(k, spec.kappa) * t);
    const double sobolev = std::pow(1.0 + k * k + eta * eta, 0.5 * spec.s);
    return M_iota(t, k, eta, spec) * growth * sobolev;
}

double dt_W_iota(double t, double k, double eta, double iota) {
    if (!in_band(k, iota)) return 0.0;
    const double a = band_rate(k, iota);
    const double x = t - eta / k;
    return -a / (1.0 + a * a * x * x);
}

double dt_W_cal(double t, double k, double eta) {
    if (k == 0.0) return 0.0;
    const double q = eta - k * t;
    return -(k * k) / (k * k + q * q);
}

double dt_M_iota(double t, double k, double eta, const MultiplierSpec& spec) {
    return W_cal(t, k, eta) * dt_W_iota(t, k, eta, spec.iota) + W_iota(t, k, eta, spec.iota) * dt_W_cal(t, k, eta);
}

double deta_W_iota(double t, double k, double eta, double iota) {
    if (!in_band(k, iota)) return 0.0;
    const double a = band_rate(k, iota);
    const double x = t - eta / k;
    return (a / k) / (1.0 + a * a * x * x);
}

double deta_W_cal(double t, double k, double eta) {
    if (k == 0.0) return 0.0;
    const double x = t - eta / k;
    return (1.0 / k) / (1.0 + x * x);
}

double deta_M_iota(double t, double k, double eta, const MultiplierSpec& spec) {
    return W_cal(t, k, eta) * deta_W_iota(t, k, eta, spec.iota) +
           W_iota(t, k, eta, spec.iota) * deta_W_cal(t, k, eta);
}

SpectralField apply_A_weight(const SpectralField& f, const MultiplierSpec& spec, double t) {
    require_frame(f, Frame::sheared, "apply_A_weight");
    const Grid& g = *f.grid;
    SpectralField out = f;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) out(i, j) *= A_iota(t, g.kz[i], g.ky[j], spec);
    return out;
}

}  // namespace pks
