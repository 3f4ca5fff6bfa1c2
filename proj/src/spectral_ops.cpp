#include "pks/spectral_ops.hpp"

#include <algorithm>
#include <cmath>

#include "pks/fft.hpp"

namespace pks {

GradientL gradient_L(const SpectralField& f, double t) {
    require_frame(f, Frame::sheared, "gradient_L");
    const Grid& g = *f.grid;
    GradientL out{SpectralField::zeros(f.grid, Frame::sheared, t), SpectralField::zeros(f.grid, Frame::sheared, t)};
    for (int i = 0; i < g.nx; ++i) {
        const double k = g.kz[i];
        for (int j = 0; j < g.ny; ++j) {
            if (g.nyquist(i, j)) continue;
            const Complex c = f(i, j);
            out.dz(i, j) = Complex(0.0, k) * c;
            out.dy(i, j) = Complex(0.0, sheared_eta(k, g.ky[j], t)) * c;
        }
    }
    return out;
}

void dealias_in_place(SpectralField& f) {
    const Grid& g = *f.grid;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            if (!g.retained(i, j)) f(i, j) = Complex{};
}

SpectralField dealias(SpectralField f) {
    dealias_in_place(f);
    return f;
}

void clear_nyquist(SpectralField& f) {
    const Grid& g = *f.grid;
    for (int j = 0; j < g.ny; ++j) f(g.nx / 2, j) = Complex{};
    for (int i = 0; i < g.nx; ++i) f(i, g.ny / 2) = Complex{};
}

ModeSplit zero_mode_split(const SpectralField& f) {
    const Grid& g = *f.grid;
    ModeSplit out{SpectralField::zeros(f.grid, f.frame, f.time), f};
    for (int j = 0; j < g.ny; ++j) {
        out.zero(0, j) = f(0, j);
        out.remainder(0, j) = Complex{};
    }
    return out;
}

std::vector<double> zero_mode_profile(const SpectralField& f) {
    const Grid& g = *f.grid;
    std::vector<Complex> column(g.size(), Complex{});
    for (int j = 0; j < g.ny; ++j) column[g.index(0, j)] = f(0, j);
    std::vector<Complex> mixed(g.size());
    inverse_transform_y(g, column, mixed);
    std::vector<double> profile(g.ny);
    for (int j = 0; j < g.ny; ++j) profile[j] = mixed[g.index(0, j)].real();
    return profile;
}

SpectralField multiply(const SpectralField& a, const SpectralField& b) {
    if (a.frame != b.frame) throw FrameError("multiply: fields in different frames");
    const Grid& g = *a.grid;
    std::vector<Complex> pa(g.size()), pb(g.size());
    inverse_transform(g, a.coeffs, std::span<Complex>(pa));
    inverse_transform(g, b.coeffs, std::span<Complex>(pb));
    for (std::size_t p = 0; p < g.size(); ++p) pa[p] = Complex(pa[p].real() * pb[p].real(), 0.0);
    SpectralField out = SpectralField::zeros(a.grid, a.frame, a.time);
    forward_transform(g, std::span<const Complex>(pa), std::span<Complex>(out.coeffs));
    dealias_in_place(out);
    return out;
}

double l2_norm(const SpectralField& f) {
    double sum = 0.0;
    for (const auto& c : f.coeffs) sum += std::norm(c);
    return std::sqrt(f.grid->area() * sum);
}

double lp_norm(const Grid& grid, std::span<const double> values, double p) {
    if (p <= 0.0) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double sum = 0.0;
    for (double v : values) sum += std::pow(std::abs(v), p);
    return std::pow(sum * grid.cell_area(), 1.0 / p);
}

double lp_norm_y(const Grid& grid, std::span<const double> profile, double p) {
    if (p <= 0.0) {
        double m = 0.0;
        for (double v : profile) m = std::max(m, std::abs(v));
        return m;
    }
    double sum = 0.0;
    for (double v : profile) sum += std::pow(std::abs(v), p);
    return std::pow(sum * grid.dy(), 1.0 / p);
}

namespace {

SpectralField shift_rows(const SpectralField& f, double t, double sign, Frame target) {
    const Grid& g = *f.grid;
    std::vector<Complex> mixed(g.size());
    inverse_transform_y(g, f.coeffs, mixed);
    for (int i = 0; i < g.nx; ++i) {
        if (i == g.nx / 2) {
            for (int j = 0; j < g.ny; ++j) mixed[g.index(i, j)] = Complex{};
            continue;
        }
        const double k = g.kz[i];
        for (int j = 0; j < g.ny; ++j) mixed[g.index(i, j)] *= std::polar(1.0, sign * k * t * g.y(j));
    }
    SpectralField out = SpectralField::zeros(f.grid, target, t);
    forward_transform_y(g, mixed, out.coeffs);
    return out;
}

}  // namespace

SpectralField to_lab(const SpectralField& f, double t) {
    require_frame(f, Frame::sheared, "to_lab");
    return shift_rows(f, t, -1.0, Frame::lab);
}

SpectralField to_sheared(const SpectralField& f, double t) {
    require_frame(f, Frame::lab, "to_sheared");
    return shift_rows(f, t, +1.0, Frame::sheared);
}

}  // namespace pks
