#pragma once

#include <cstdint>
#include <span>

#include "pks/params.hpp"
#include "pks/spectral_field.hpp"

namespace pks {

struct Blob {
    double mass = 1.0;
    double z = kPi;
    double y = 0.0;
    double sigma = 0.5;
};

/// Sum of doubly periodized Gaussians M / (2 pi sigma^2) exp(-|x - x0|^2 / (2 sigma^2)), dealiased.
SpectralField gaussian_blobs(GridPtr grid, std::span<const Blob> blobs);

enum class OmegaKind { zero, mode, threshold, random };

/// Initial vorticity. `mode` is amplitude * cos(k z + eta y) with eta = eta_index * 2 pi / Ly;
/// `threshold` is the same shape scaled to ||omega||_{H^s} = epsilon * nu^{1/2};
/// `random` draws seeded low-mode coefficients scaled to ||omega||_{H^s} = amplitude.
struct OmegaSpec {
    OmegaKind kind = OmegaKind::zero;
    int k = 1;
    int eta_index = 0;
    double amplitude = 0.0;
};

SpectralField initial_vorticity(GridPtr grid, const OmegaSpec& spec, const PhysParams& params,
                                std::uint64_t seed = 0);

}  // namespace pks
