#pragma once

#include <cstdint>
#include <random>

#include "pks/spectral_field.hpp"
#include "pks/spectral_ops.hpp"

namespace pks::test {

/// Random real field with Hermitian coefficients; `shell` restricts it to the 2/3 shell.
inline SpectralField random_real_field(GridPtr g, std::uint64_t seed, bool shell, double decay = 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> v(g->size());
    for (double& x : v) x = normal(rng);
    SpectralField f = SpectralField::from_physical(g, v);
    clear_nyquist(f);
    if (shell) dealias_in_place(f);
    if (decay > 0.0)
        for (int i = 0; i < g->nx; ++i)
            for (int j = 0; j < g->ny; ++j)
                f(i, j) *= std::exp(-decay * (g->kz[i] * g->kz[i] + g->ky[j] * g->ky[j]));
    return f;
}

}  // namespace pks::test
