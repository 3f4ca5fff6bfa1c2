#pragma once

#include "pks/spectral_field.hpp"

namespace pks {

/// Perturbation velocity in sheared coordinates: u1 along z, u2 along y.
struct VelocityField {
    SpectralField u1;
    SpectralField u2;
    double time = 0.0;
};

/// C = (1 - Delta_L)^{-1} N, i.e. C(k,eta) = N(k,eta) / (1 + k^2 + (eta - k t)^2).
SpectralField solve_chemical(const SpectralField& n, double t);

/// U = grad_L^perp Delta_L^{-1} Omega with grad_L^perp = (-d_y^t, d_z). The streamfunction's (0,0)
/// mode is gauged to zero, so curl_L(U) reproduces Omega on every mode except (0,0).
VelocityField biot_savart(const SpectralField& omega, double t);

/// grad_L^perp . (a, b) = -d_y^t a + d_z b.
SpectralField curl_L(const SpectralField& a, const SpectralField& b, double t);

/// grad_L . (a, b) = d_z a + d_y^t b.
SpectralField divergence_L(const SpectralField& a, const SpectralField& b, double t);

struct ChemotaxisFlux {
    SpectralField z;  // N d_z C
    SpectralField y;  // N d_y^t C
};

/// Dealiased products (N d_z C, N d_y^t C); callers take divergence or curl.
ChemotaxisFlux chemotaxis_flux(const SpectralField& n, const SpectralField& c, double t);

}  // namespace pks
