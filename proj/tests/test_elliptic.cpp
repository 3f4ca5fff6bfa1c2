#include <cmath>

#include "doctest.h"
#include "pks/diagnostics.hpp"
#include "pks/elliptic.hpp"
#include "pks/spectral_ops.hpp"
#include "test_support.hpp"

using namespace pks;
using pks::test::random_real_field;

namespace {

SpectralField positive_field(GridPtr g, std::uint64_t seed) {
    const SpectralField r = random_real_field(g, seed, true, 0.05);
    std::vector<double> v = r.to_physical();
    for (double& x : v) x = std::exp(x);
    return SpectralField::from_physical(g, v);
}

}  // namespace

TEST_CASE("solve_chemical point values") {
    GridPtr g = make_grid(16, 16, 16.0 * kPi);
    SpectralField n = SpectralField::zeros(g);
    n(0, 0) = 1.0;
    CHECK(solve_chemical(n, 0.0)(0, 0) == Complex(1.0));
    CHECK(solve_chemical(n, 3.0)(0, 0) == Complex(1.0));

    SpectralField m = SpectralField::zeros(g);
    m(1, 0) = 1.0;
    m(15, 0) = 1.0;
    CHECK(solve_chemical(m, 0.0)(1, 0) == Complex(0.5));
    // at t = 2 the (1, 0) mode sits at sheared eta = -2
    CHECK(std::abs(solve_chemical(m, 2.0)(1, 0) - Complex(1.0 / 6.0)) < 1e-16);
}

TEST_CASE("solve_chemical is an L2 contraction coefficientwise") {
    GridPtr g = make_grid(32, 64, 8.0 * kPi);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const SpectralField n = random_real_field(g, seed, false);
        for (double t : {0.0, 0.3, 4.0}) {
            const SpectralField c = solve_chemical(n, t);
            for (std::size_t p = 0; p < n.coeffs.size(); ++p) CHECK(std::abs(c.coeffs[p]) <= std::abs(n.coeffs[p]));
            CHECK(l2_norm(c) <= l2_norm(n));
        }
    }
}

TEST_CASE("chemical gradient estimates on the zero mode") {
    GridPtr g = make_grid(16, 256, 16.0 * kPi);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SpectralField n = positive_field(g, 40 + seed);
        const SpectralField c0 = zero_mode_split(solve_chemical(n, 0.7)).zero;
        const SpectralField dyc0 = gradient_L(c0, 0.7).dy;
        const std::vector<double> prof_d = zero_mode_profile(dyc0);
        const std::vector<double> prof_n = zero_mode_profile(n);
        // sup |d_y C_0| <= ||N_0||_{L^1}
        CHECK(lp_norm_y(*g, prof_d, 0.0) <= lp_norm_y(*g, prof_n, 1.0));
        // ||d_y C_0||_{H^s} <= ||N_0||_{H^{s-1}}
        for (int s : {1, 2, 5})
            CHECK(zero_mode_sobolev_norm_sq(dyc0, s) <= zero_mode_sobolev_norm_sq(n, s - 1) * (1 + 1e-13));
    }
}

TEST_CASE("biot_savart") {
    GridPtr g = make_grid(32, 64, 8.0 * kPi);
    SUBCASE("zero vorticity") {
        const VelocityField u = biot_savart(SpectralField::zeros(g), 1.0);
        CHECK(max_abs(u.u1) == 0.0);
        CHECK(max_abs(u.u2) == 0.0);
    }
    SUBCASE("z-independent vorticity has no y-velocity") {
        const SpectralField w = zero_mode_split(random_real_field(g, 3, false)).zero;
        for (double t : {0.0, 2.5}) {
            const VelocityField u = biot_savart(w, t);
            CHECK(max_abs(u.u2) == 0.0);
        }
    }
    SUBCASE("zero mode of u2 vanishes for any vorticity") {
        const SpectralField w = random_real_field(g, 4, false);
        const VelocityField u = biot_savart(w, 1.5);
        CHECK(max_abs(zero_mode_split(u.u2).zero) == 0.0);
    }
    SUBCASE("curl round trip and divergence") {
        for (std::uint64_t seed = 10; seed < 15; ++seed) {
            const SpectralField w = random_real_field(g, seed, false);
            for (double t : {0.0, 0.9, 7.0}) {
                const VelocityField u = biot_savart(w, t);
                SpectralField back = curl_L(u.u1, u.u2, t);
                SpectralField expect = w;
                expect(0, 0) = 0.0;
                CHECK(max_abs(back - expect) <= 1e-12 * max_abs(w));
                CHECK(max_abs(divergence_L(u.u1, u.u2, t)) <= 1e-12 * max_abs(w));
                CHECK(hermitian_defect(u.u1) <= 1e-15 * max_abs(w) * 10);
            }
        }
    }
}

TEST_CASE("chemotaxis_flux") {
    GridPtr g = make_grid(16, 16, 16.0 * kPi);
    SUBCASE("constant C gives zero flux") {
        SpectralField c = SpectralField::zeros(g);
        c(0, 0) = 3.0;
        const ChemotaxisFlux f = chemotaxis_flux(random_real_field(g, 1, true), c, 0.4);
        CHECK(max_abs(f.z) == 0.0);
        CHECK(max_abs(f.y) == 0.0);
    }
    SUBCASE("constant N times single-mode C") {
        SpectralField n = SpectralField::zeros(g);
        n(0, 0) = 2.5;
        SpectralField c = SpectralField::zeros(g);
        c(2, 1) = Complex(0.3, 0.4);
        c(14, 15) = std::conj(c(2, 1));
        const double t = 0.6;
        const ChemotaxisFlux f = chemotaxis_flux(n, c, t);
        const GradientL d = gradient_L(c, t);
        CHECK(max_abs(f.z - 2.5 * d.dz) <= 1e-15);
        CHECK(max_abs(f.y - 2.5 * d.dy) <= 1e-15);
    }
    SUBCASE("direct convolution oracle") {
        const SpectralField n = random_real_field(g, 31, true);
        const SpectralField c = random_real_field(g, 32, true);
        const double t = 0.35;
        const ChemotaxisFlux f = chemotaxis_flux(n, c, t);
        double worst = 0.0, scale = 0.0;
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 16; ++j) {
                if (!g->retained(i, j)) continue;
                const int k = g->kz[i], m = g->ky_index[j];
                Complex ez = 0.0, ey = 0.0;
                for (int i1 = 0; i1 < 16; ++i1)
                    for (int j1 = 0; j1 < 16; ++j1) {
                        const int k2 = k - g->kz[i1], m2 = m - g->ky_index[j1];
                        if (std::abs(k2) > 5 || std::abs(m2) > 5) continue;
                        const Complex cc = c((k2 + 16) % 16, (m2 + 16) % 16);
                        const double q2 = m2 * g->eta_step() - k2 * t;
                        ez += n(i1, j1) * Complex(0.0, k2) * cc;
                        ey += n(i1, j1) * Complex(0.0, q2) * cc;
                    }
                worst = std::max({worst, std::abs(f.z(i, j) - ez), std::abs(f.y(i, j) - ey)});
                scale = std::max({scale, std::abs(ez), std::abs(ey)});
            }
        CHECK(worst <= 1e-12 * scale);
    }
    SUBCASE("time mismatch") {
        SpectralField n = SpectralField::zeros(g, Frame::sheared, 1.0);
        SpectralField c = SpectralField::zeros(g, Frame::sheared, 2.0);
        CHECK_THROWS_AS(chemotaxis_flux(n, c, 1.0), FrameError);
    }
}
