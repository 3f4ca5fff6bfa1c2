#include "pks/initial_data.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "pks/diagnostics.hpp"
#include "pks/spectral_ops.hpp"

namespace pks {

SpectralField gaussian_blobs(GridPtr grid, std::span<const Blob> blobs) {
    const Grid& g = *grid;
    std::vector<double> values(g.size(), 0.0);
    for (const Blob& b : blobs) {
        if (!(b.sigma > 0.0)) throw std::invalid_argument("blob sigma must be > 0");
        if (!(b.mass >= 0.0)) throw std::invalid_argument("blob mass must be >= 0");
        const double amp = b.mass / (2.0 * kPi * b.sigma * b.sigma);
        const double inv2s2 = 1.0 / (2.0 * b.sigma * b.sigma);
        const int images_z = static_cast<int>(std::ceil(10.0 * b.sigma / g.lx)) + 1;
        const int images_y = static_cast<int>(std::ceil(10.0 * b.sigma / g.ly)) + 1;
        // separable: precompute the periodized 1D factors
        std::vector<double> fz(g.nx, 0.0), fy(g.ny, 0.0);
        for (int i = 0; i < g.nx; ++i)
            for (int m = -images_z; m <= images_z; ++m) {
                const double d = g.z(i) - b.z + m * g.lx;
                fz[i] += std::exp(-d * d * inv2s2);
            }
        for (int j = 0; j < g.ny; ++j)
            for (int m = -images_y; m <= images_y; ++m) {
                const double d = g.y(j) - b.y + m * g.ly;
                fy[j] += std::exp(-d * d * inv2s2);
            }
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) values[g.index(i, j)] += amp * fz[i] * fy[j];
    }
    SpectralField n = SpectralField::from_physical(grid, values);
    dealias_in_place(n);
    return n;
}

namespace {

SpectralField plane_mode(GridPtr grid, int k, int eta_index, double amplitude) {
    const Grid& g = *grid;
    if (3 * std::abs(k) > g.nx || 3 * std::abs(eta_index) > g.ny)
        throw std::invalid_argument("vorticity mode lies outside the retained shell");
    if (k == 0 && eta_index == 0) throw std::invalid_argument("vorticity mode must not be the (0,0) mean");
    SpectralField f = SpectralField::zeros(grid);
    const int i = (k + g.nx) % g.nx;
    const int j = (eta_index + g.ny) % g.ny;
    const int ip = (g.nx - i) % g.nx;
    const int jp = (g.ny - j) % g.ny;
    // cos(k z + eta (y + Ly/2)) -> 1/2 at (k, eta) and its conjugate partner
    f(i, j) += 0.5 * amplitude;
    f(ip, jp) += 0.5 * amplitude;
    return f;
}

}  // namespace

SpectralField initial_vorticity(GridPtr grid, const OmegaSpec& spec, const PhysParams& params, std::uint64_t seed) {
    switch (spec.kind) {
    case OmegaKind::zero:
        return SpectralField::zeros(grid);
    case OmegaKind::mode:
        return plane_mode(grid, spec.k, spec.eta_index, spec.amplitude);
    case OmegaKind::threshold: {
        SpectralField f = plane_mode(grid, spec.k, spec.eta_index, 1.0);
        const double target = params.epsilon * std::sqrt(params.nu);
        f *= target / std::sqrt(sobolev_norm_sq(f, params.s));
        return f;
    }
    case OmegaKind::random: {
        const Grid& g = *grid;
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        SpectralField f = SpectralField::zeros(grid);
        const int kmax = 3;
        const int jmax = 8;
        for (int k = 0; k <= kmax; ++k)
            for (int jj = -jmax; jj <= jmax; ++jj) {
                if (k == 0 && jj <= 0) continue;  // each conjugate pair once, no mean
                const Complex c(normal(rng), normal(rng));
                const int i = k;
                const int j = (jj + g.ny) % g.ny;
                f(i, j) = c;
                f((g.nx - i) % g.nx, (g.ny - j) % g.ny) = std::conj(c);
            }
        const double norm = std::sqrt(sobolev_norm_sq(f, params.s));
        if (norm > 0.0) f *= spec.amplitude / norm;
        return f;
    }
    }
    throw std::invalid_argument("unknown vorticity kind");
}

}  // namespace pks
