#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pks/grid.hpp"

namespace pks {

enum class Frame { sheared, lab };

std::string to_string(Frame frame);

/// Raised when an operator receives a field in the wrong frame or at a mismatched time.
class FrameError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Fourier coefficients of a real field on `grid`.
///
/// `time` is the shear time at which time-dependent symbols were last applied to the field.
struct SpectralField {
    GridPtr grid;
    std::vector<Complex> coeffs;
    Frame frame = Frame::sheared;
    double time = 0.0;

    static SpectralField zeros(GridPtr grid, Frame frame = Frame::sheared, double time = 0.0);
    static SpectralField from_physical(GridPtr grid, std::span<const double> values,
                                       Frame frame = Frame::sheared, double time = 0.0);

    std::vector<double> to_physical() const;

    Complex& operator()(int i, int j) { return coeffs[grid->index(i, j)]; }
    const Complex& operator()(int i, int j) const { return coeffs[grid->index(i, j)]; }

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double scale);

    /// this += scale * other
    SpectralField& axpy(double scale, const SpectralField& other);

    bool all_finite() const;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double scale, SpectralField a);

/// Largest |c(-k,-eta) - conj(c(k,eta))| over modes whose partner lies on the grid
/// (Nyquist lines excluded). Zero for a field that is exactly real.
double hermitian_defect(const SpectralField& f);

/// Largest coefficient magnitude.
double max_abs(const SpectralField& f);

void require_frame(const SpectralField& f, Frame frame, const char* what);
void require_same_time(const SpectralField& a, const SpectralField& b, const char* what);

}  // namespace pks
