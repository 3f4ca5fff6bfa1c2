#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pks/dynamics.hpp"
#include "pks/elliptic.hpp"
#include "pks/multipliers.hpp"
#include "pks/spectral_field.hpp"

namespace pks {

/// Total cell mass, area * Re N(0,0).
double mass(const SpectralField& n);

struct FreeEnergy {
    double F = 0.0;  // E + 1/2 int |u|^2
    double E = 0.0;  // int n log n - 1/2 n c
    double clamped_mass_fraction = 0.0;  // mass of negative undershoots / total |mass|
    bool clamp_flag = false;             // clamped_mass_fraction > 1e-4
};

/// Midpoint quadrature on the physical grid. Negative values of n are clamped to 0 inside the
/// log term only (0 log 0 = 0); the amount clamped is reported.
FreeEnergy free_energy(const SpectralField& n, const SpectralField& c, const VelocityField& u);
FreeEnergy free_energy(const SimState& state, const Switches& sw);

/// int N y^2 dA with y in [-Ly/2, Ly/2).
double second_moment(const SpectralField& n);

/// ||f||_{H^s}^2 = area * sum (1 + k^2 + eta^2)^s |f(k,eta)|^2.
double sobolev_norm_sq(const SpectralField& f, int s);

/// ||f_0||_{H^s(R)}^2 = Ly * sum_eta (1 + eta^2)^s |f(0,eta)|^2, the z-average as a function of y.
double zero_mode_sobolev_norm_sq(const SpectralField& f, int s);

/// ||A f_neq||_2^2 with A = A_iota(t, k, eta) over k != 0.
double weighted_norm_neq_sq(const SpectralField& f, const MultiplierSpec& spec, double t);

/// ||f(k, .)||_2 over the single row +k.
double mode_norm(const SpectralField& f, int k);

/// Instantaneous integrands of the time integrals in the bootstrap functionals.
struct BootstrapIntegrands {
    double n_dtM = 0.0;    // || sqrt(-dt M_kappa / M_kappa) A_kappa N_neq ||^2
    double n_diss = 0.0;   // || A_kappa sqrt(-Delta_L) N_neq ||^2
    double w_dtM = 0.0;    // || sqrt(-dt M_nu / M_nu) A_nu Omega_neq ||^2
    double w_diss = 0.0;   // || A_nu sqrt(-Delta_L) Omega_neq ||^2
    double w0_diss = 0.0;  // || d_y Omega_0 ||_{H^s}^2
};

BootstrapIntegrands bootstrap_integrands(const SimState& state, const Switches& sw);

/// Running trapezoid integrals of the bootstrap integrands, one update per accepted step.
class BootstrapAccumulator {
public:
    BootstrapAccumulator() = default;
    explicit BootstrapAccumulator(Switches sw) : sw_(sw) {}

    void reset(const SimState& state);
    void advance(const SimState& state);

    /// Restores a previously saved accumulator (checkpoint resume).
    void restore(double t, const BootstrapIntegrands& last, const BootstrapIntegrands& totals);

    const BootstrapIntegrands& totals() const { return totals_; }
    const BootstrapIntegrands& last() const { return last_; }
    double time() const { return t_; }

private:
    Switches sw_;
    double t_ = 0.0;
    BootstrapIntegrands last_;
    BootstrapIntegrands totals_;
};

/// One output row.
struct DiagnosticsRecord {
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;
    double free_energy_F = 0.0;
    double energy_E = 0.0;
    double clamped_mass_fraction = 0.0;
    double second_moment = 0.0;
    double min_N = 0.0;
    double sup_N = 0.0;
    double norm_AkappaN_neq = 0.0;
    double norm_AnuOmega_neq = 0.0;
    double norm_N0_Hs = 0.0;
    double norm_Omega0_Hs = 0.0;
    BootstrapIntegrands integrals;
    std::array<double, 4> hypotheses{};  // the four left-hand sides
    double boundary_mass_fraction = 0.0;
    std::array<double, 3> mode_norm_N{};  // k = 1, 2, 3
    double tail_fraction = 0.0;
    int k_active = 0;
};

DiagnosticsRecord compute_record(const SimState& state, const Switches& sw, const BootstrapAccumulator& acc,
                                 double dt = 0.0);

/// CSV column names, in output order.
const std::vector<std::string>& record_columns();
std::vector<double> record_values(const DiagnosticsRecord& r);
DiagnosticsRecord record_from_values(std::span<const double> values);

class WindowTooShort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RateFit {
    double rate = 0.0;  // -d log ||N(k)|| / dt over the window
    double t_begin = 0.0;
    double t_end = 0.0;
    double decades = 0.0;  // decay of ||N(k)|| across the window, log10
    int points = 0;
    bool decaying = false;
};

/// Least-squares slope of log(amplitude) vs t, from the first drop below half the peak
/// (after the peak) until the amplitude falls under 1e-13 of the peak. A series that never
/// drops below half its peak is nondecaying (rate 0). Throws WindowTooShort if the window
/// spans fewer than `min_decades` decades or fewer than 3 samples.
RateFit fit_enhanced_dissipation_rate(std::span<const double> t, std::span<const double> amplitude,
                                      double min_decades = 3.0);

/// delta kappa^{1/3} |k|^{2/3}: the lower bound the fitted rate is compared against.
double enhanced_dissipation_bound(double kappa, double delta, int k);

}  // namespace pks
