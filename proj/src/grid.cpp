#include "pks/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pks {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<int> fft_order(int n) {
    std::vector<int> out(n);
    for (int i = 0; i < n; ++i) out[i] = i < n / 2 ? i : i - n;
    return out;
}

}  // namespace

GridPtr make_grid(int nx, int ny, double ly) {
    if (nx < 16 || ny < 16 || nx % 2 != 0 || ny % 2 != 0)
        throw std::invalid_argument("grid sizes must be even and >= 16 (got " + std::to_string(nx) + "x" +
                                    std::to_string(ny) + ")");
    if (!is_power_of_two(nx))
        throw std::invalid_argument("nx must be a power of two (got " + std::to_string(nx) + ")");
    if (!(ly >= 4.0 * kPi) || !std::isfinite(ly))
        throw std::invalid_argument("ly must be >= 4*pi (got " + std::to_string(ly) + ")");

    auto g = std::make_shared<Grid>();
    g->nx = nx;
    g->ny = ny;
    g->ly = ly;
    g->kz = fft_order(nx);
    g->ky_index = fft_order(ny);
    g->ky.resize(ny);
    for (int j = 0; j < ny; ++j) g->ky[j] = g->eta_step() * g->ky_index[j];
    return g;
}

}  // namespace pks
