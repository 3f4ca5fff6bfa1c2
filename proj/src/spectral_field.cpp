#include "pks/spectral_field.hpp"

#include <algorithm>
#include <cmath>

#include "pks/fft.hpp"

namespace pks {

std::string to_string(Frame frame) { return frame == Frame::sheared ? "sheared" : "lab"; }

SpectralField SpectralField::zeros(GridPtr grid, Frame frame, double time) {
    SpectralField f;
    f.coeffs.assign(grid->size(), Complex{});
    f.grid = std::move(grid);
    f.frame = frame;
    f.time = time;
    return f;
}

SpectralField SpectralField::from_physical(GridPtr grid, std::span<const double> values, Frame frame,
                                           double time) {
    SpectralField f = zeros(std::move(grid), frame, time);
    if (values.size() != f.grid->size()) throw std::invalid_argument("physical array size does not match grid");
    forward_transform(*f.grid, values, std::span<Complex>(f.coeffs));
    return f;
}

std::vector<double> SpectralField::to_physical() const { return inverse_transform(*grid, coeffs); }

namespace {

void check_compatible(const SpectralField& a, const SpectralField& b) {
    if (a.grid->nx != b.grid->nx || a.grid->ny != b.grid->ny || a.grid->ly != b.grid->ly)
        throw std::invalid_argument("fields live on different grids");
    if (a.frame != b.frame) throw FrameError("cannot combine fields in different frames");
}

}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& other) { return axpy(1.0, other); }

SpectralField& SpectralField::operator-=(const SpectralField& other) { return axpy(-1.0, other); }

SpectralField& SpectralField::operator*=(double scale) {
    for (auto& c : coeffs) c *= scale;
    return *this;
}

SpectralField& SpectralField::axpy(double scale, const SpectralField& other) {
    check_compatible(*this, other);
    for (std::size_t p = 0; p < coeffs.size(); ++p) coeffs[p] += scale * other.coeffs[p];
    return *this;
}

bool SpectralField::all_finite() const {
    return std::all_of(coeffs.begin(), coeffs.end(),
                       [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double scale, SpectralField a) { return a *= scale; }

double hermitian_defect(const SpectralField& f) {
    const Grid& g = *f.grid;
    double worst = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
            if (g.nyquist(i, j)) continue;
            const int ip = (g.nx - i) % g.nx;
            const int jp = (g.ny - j) % g.ny;
            worst = std::max(worst, std::abs(f(ip, jp) - std::conj(f(i, j))));
        }
    }
    return worst;
}

double max_abs(const SpectralField& f) {
    double m = 0.0;
    for (const auto& c : f.coeffs) m = std::max(m, std::abs(c));
    return m;
}

void require_frame(const SpectralField& f, Frame frame, const char* what) {
    if (f.frame != frame)
        throw FrameError(std::string(what) + ": expected " + to_string(frame) + " frame, got " +
                         to_string(f.frame));
}

void require_same_time(const SpectralField& a, const SpectralField& b, const char* what) {
    const double scale = std::max({1.0, std::abs(a.time), std::abs(b.time)});
    if (std::abs(a.time - b.time) > 1e-12 * scale)
        throw FrameError(std::string(what) + ": fields are tagged at different times (" + std::to_string(a.time) +
                         " vs " + std::to_string(b.time) + ")");
}

}  // namespace pks
