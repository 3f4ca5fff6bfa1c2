#pragma once

#include "pks/spectral_field.hpp"

namespace pks {

/// Largest admissible growth-rate constant delta for the weighted energy estimates.
inline constexpr double kDeltaMax = 1.0 / (16.0 * kPi * kPi);

/// Parameters of one multiplier family. `iota` is the diffusivity the W_iota factor is built
/// on (kappa for the cell density, nu for the vorticity); `kappa` always drives the shared
/// exponential factor of A_iota.
struct MultiplierSpec {
    double iota = 1.0;
    double kappa = 1.0;
    double delta = kDeltaMax;
    int s = 0;

    void validate() const;
};

// All functions below are pointwise in (t, k, eta); k is an integer wavenumber passed as double.

/// True when 0 < |k| <= iota^{-1/2} (closed at the upper end).
bool in_band(double k, double iota);

/// pi - arctan(iota^{1/3} |k|^{2/3} (t - eta/k)) on the band, pi elsewhere.
double W_iota(double t, double k, double eta, double iota);

/// pi - arctan(t - eta/k) for k != 0, pi at k = 0.
double W_cal(double t, double k, double eta);

double M_iota(double t, double k, double eta, const MultiplierSpec& spec);

/// M_iota * exp(delta kappa^{1/3} |k|^{2/3} t) * (1 + k^2 + eta^2)^{s/2}.
double A_iota(double t, double k, double eta, const MultiplierSpec& spec);

double dt_W_iota(double t, double k, double eta, double iota);
double dt_W_cal(double t, double k, double eta);
double dt_M_iota(double t, double k, double eta, const MultiplierSpec& spec);

double deta_W_iota(double t, double k, double eta, double iota);
double deta_W_cal(double t, double k, double eta);
double deta_M_iota(double t, double k, double eta, const MultiplierSpec& spec);

/// Coefficientwise multiplication by A_iota(t, k, eta).
SpectralField apply_A_weight(const SpectralField& f, const MultiplierSpec& spec, double t);

}  // namespace pks
