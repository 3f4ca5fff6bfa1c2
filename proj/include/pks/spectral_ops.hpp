#pragma once

#include <span>
#include <vector>

#include "pks/spectral_field.hpp"

namespace pks {

/// Sheared y-wavenumber eta - k t.
inline double sheared_eta(double k, double eta, double t) { return eta - k * t; }

/// Symbol of Delta_L = d_zz + (d_y - t d_z)^2, i.e. -(k^2 + (eta - k t)^2).
inline double laplacian_L_symbol(double k, double eta, double t) {
    const double q = sheared_eta(k, eta, t);
    return -(k * k + q * q);
}

struct GradientL {
    SpectralField dz;
    SpectralField dy;  // d_y^t = d_y - t d_z
};

/// (d_z f, (d_y - t d_z) f) via the symbols (ik, i(eta - k t)). Nyquist lines of the output are zero.
GradientL gradient_L(const SpectralField& f, double t);

/// 2/3-rule truncation: zeroes modes with |k| > nx/3 or |j| > ny/3.
SpectralField dealias(SpectralField f);
void dealias_in_place(SpectralField& f);

/// Zeroes the k = -nx/2 row and j = -ny/2 column, whose conjugate partners are not on the grid.
void clear_nyquist(SpectralField& f);

struct ModeSplit {
    SpectralField zero;       // k = 0 column (z-average)
    SpectralField remainder;  // everything else
};

/// f = f_0 + f_neq, exactly (disjoint coefficient supports).
ModeSplit zero_mode_split(const SpectralField& f);

/// Physical y-profile of the z-average f_0(y_j).
std::vector<double> zero_mode_profile(const SpectralField& f);

/// Dealiased pseudo-spectral product of two real fields.
SpectralField multiply(const SpectralField& a, const SpectralField& b);

/// ||f||_{L^2(T x [-Ly/2, Ly/2))} from coefficients (Parseval).
double l2_norm(const SpectralField& f);

/// Discrete L^p norm of grid values on the full domain; p <= 0 selects the sup norm.
double lp_norm(const Grid& grid, std::span<const double> values, double p);

/// Discrete L^p norm over y of a profile sampled on the grid's y points; p <= 0 selects the sup norm.
double lp_norm_y(const Grid& grid, std::span<const double> profile, double p);

/// Lab frame n(x, y) = N(x - t y, y) and its inverse; exact in z, sampled in y.
SpectralField to_lab(const SpectralField& f, double t);
SpectralField to_sheared(const SpectralField& f, double t);

}  // namespace pks
