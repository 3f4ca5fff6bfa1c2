#pragma once

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <vector>

namespace pks {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Truncated T_{2pi} x [-Ly/2, Ly/2) grid in sheared coordinates (z, y).
///
/// Coefficient and physical arrays share the row-major layout (i, j) -> i*ny + j,
/// with i running over z / k and j over y / eta. Wavenumbers follow FFT ordering.
struct Grid {
    int nx = 0;
    int ny = 0;
    double lx = 2.0 * kPi;
    double ly = 0.0;

    std::vector<int> kz;        // integer z-wavenumbers, FFT order
    std::vector<int> ky_index;  // integer y-mode indices, FFT order
    std::vector<double> ky;     // eta = (2 pi / Ly) * ky_index

    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j);
    }

    double dz() const { return lx / nx; }
    double dy() const { return ly / ny; }
    double cell_area() const { return dz() * dy(); }
    double area() const { return lx * ly; }
    double eta_step() const { return 2.0 * kPi / ly; }

    double z(int i) const { return i * dz(); }
    double y(int j) const { return -0.5 * ly + j * dy(); }

    // 2/3-rule shell: |k| <= nx/3 and |j| <= ny/3
    bool retained(int i, int j) const {
        return 3 * std::abs(kz[i]) <= nx && 3 * std::abs(ky_index[j]) <= ny;
    }
    int k_cut() const { return nx / 3; }
    int j_cut() const { return ny / 3; }
    double eta_max_retained() const { return j_cut() * eta_step(); }

    bool nyquist(int i, int j) const { return i == nx / 2 || j == ny / 2; }
};

using GridPtr = std::shared_ptr<const Grid>;

/// Builds a grid; nx must be a power of two, both sizes even and >= 16, Ly >= 4 pi.
/// Throws std::invalid_argument otherwise.
GridPtr make_grid(int nx, int ny, double ly = 16.0 * kPi);

}  // namespace pks
