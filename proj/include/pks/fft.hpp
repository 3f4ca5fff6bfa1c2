#pragma once

#include <span>
#include <vector>

#include "pks/grid.hpp"

namespace pks {

// FFTW-backed 2D transforms on a Grid.
//
// forward:  c(k,eta) = 1/(nx*ny) * sum_{i,j} f(z_i, y_j) exp(-i (k z_i + eta (y_j + Ly/2)))
// inverse:  f(z_i, y_j) = sum_{k,eta} c(k,eta) exp(+i (k z_i + eta (y_j + Ly/2)))
//
// With this normalization the (0,0) coefficient is the domain mean, so mass = c(0,0) * Lx * Ly.
// Plans are created once per size under a lock; execution is reentrant.

void forward_transform(const Grid& grid, std::span<const double> physical, std::span<Complex> coeffs);
void forward_transform(const Grid& grid, std::span<const Complex> physical, std::span<Complex> coeffs);

// Takes the real part of the synthesized field. `scratch` must hold grid.size() values.
void inverse_transform(const Grid& grid, std::span<const Complex> coeffs, std::span<double> physical,
                       std::span<Complex> scratch);
void inverse_transform(const Grid& grid, std::span<const Complex> coeffs, std::span<Complex> physical);

std::vector<Complex> forward_transform(const Grid& grid, std::span<const double> physical);
std::vector<double> inverse_transform(const Grid& grid, std::span<const Complex> coeffs);

// 1D transforms along y for every k-row (mixed representation c(k, y_j)). Same normalization
// convention as the 2D pair: forward carries 1/ny.
void forward_transform_y(const Grid& grid, std::span<const Complex> mixed, std::span<Complex> coeffs);
void inverse_transform_y(const Grid& grid, std::span<const Complex> coeffs, std::span<Complex> mixed);

}  // namespace pks
