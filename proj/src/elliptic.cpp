#include "pks/elliptic.hpp"

#include "pks/spectral_ops.hpp"

namespace pks {

SpectralField solve_chemical(const SpectralField& n, double t) {
    require_frame(n, Frame::sheared, "solve_chemical");
    const Grid& g = *n.grid;
    SpectralField c = SpectralField::zeros(n.grid, Frame::sheared, t);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            c(i, j) = n(i, j) / (1.0 - laplacian_L_symbol(g.kz[i], g.ky[j], t));
    clear_nyquist(c);
    return c;
}

VelocityField biot_savart(const SpectralField& omega, double t) {
    require_frame(omega, Frame::sheared, "biot_savart");
    const Grid& g = *omega.grid;
    VelocityField u{SpectralField::zeros(omega.grid, Frame::sheared, t),
                    SpectralField::zeros(omega.grid, Frame::sheared, t), t};
    for (int i = 0; i < g.nx; ++i) {
        const double k = g.kz[i];
        for (int j = 0; j < g.ny; ++j) {
            if (g.nyquist(i, j) || (i == 0 && j == 0)) continue;
            const double q = sheared_eta(k, g.ky[j], t);
            const Complex psi = omega(i, j) / laplacian_L_symbol(k, g.ky[j], t);
            u.u1(i, j) = -Complex(0.0, q) * psi;
            u.u2(i, j) = Complex(0.0, k) * psi;
        }
    }
    return u;
}

SpectralField curl_L(const SpectralField& a, const SpectralField& b, double t) {
    require_frame(a, Frame::sheared, "curl_L");
    require_frame(b, Frame::sheared, "curl_L");
    const Grid& g = *a.grid;
    SpectralField out = SpectralField::zeros(a.grid, Frame::sheared, t);
    for (int i = 0; i < g.nx; ++i) {
        const double k = g.kz[i];
        for (int j = 0; j < g.ny; ++j) {
            if (g.nyquist(i, j)) continue;
            const double q = sheared_eta(k, g.ky[j], t);
            out(i, j) = -Complex(0.0, q) * a(i, j) + Complex(0.0, k) * b(i, j);
        }
    }
    return out;
}

SpectralField divergence_L(const SpectralField& a, const SpectralField& b, double t) {
    require_frame(a, Frame::sheared, "divergence_L");
    require_frame(b, Frame::sheared, "divergence_L");
    const Grid& g = *a.grid;
    SpectralField out = SpectralField::zeros(a.grid, Frame::sheared, t);
    for (int i = 0; i < g.nx; ++i) {
        const double k = g.kz[i];
        for (int j = 0; j < g.ny; ++j) {
            if (g.nyquist(i, j)) continue;
            const double q = sheared_eta(k, g.ky[j], t);
            out(i, j) = Complex(0.0, k) * a(i, j) + Complex(0.0, q) * b(i, j);
        }
    }
    return out;
}

ChemotaxisFlux chemotaxis_flux(const SpectralField& n, const SpectralField& c, double t) {
    require_frame(n, Frame::sheared, "chemotaxis_flux");
    require_frame(c, Frame::sheared, "chemotaxis_flux");
    require_same_time(n, c, "chemotaxis_flux");
    GradientL grad = gradient_L(c, t);
    ChemotaxisFlux flux{multiply(n, grad.dz), multiply(n, grad.dy)};
    flux.z.time = t;
    flux.y.time = t;
    return flux;
}

}  // namespace pks
