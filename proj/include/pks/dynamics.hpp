#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pks/elliptic.hpp"
#include "pks/params.hpp"
#include "pks/spectral_field.hpp"

namespace pks {

/// (N, Omega) in sheared coordinates at simulation time t.
struct SimState {
    SpectralField n;
    SpectralField omega;
    double t = 0.0;
    PhysParams params;
};

/// Time at which the sheared symbols are evaluated: t with the Couette background, 0 without.
inline double shear_time(double t, const Switches& sw) { return sw.couette ? t : 0.0; }

/// int_{t0}^{t1} (k^2 + (eta - k tau)^2) dtau, evaluated without cancellation.
double dissipation_integral(double k, double eta, double t0, double t1);

/// f(k,eta) * exp(-iota * dissipation_integral(k, eta, t0, t1)). With `sheared == false` the symbol
/// is frozen at tau = 0 (no background shear). Nyquist lines are dropped unless t1 == t0.
SpectralField linear_propagator(const SpectralField& f, double iota, double t0, double t1, bool sheared = true);

struct NonlinearTerms {
    SpectralField dn;
    SpectralField domega;
    double transport_rate = 0.0;  // max over the grid of |v_z|/dz + |v_y|/dy, v = U + kappa grad_L C
    double sup_n = 0.0;
};

/// Reusable buffers for the pseudo-spectral right-hand side. Not thread-safe; one per run.
class NonlinearEvaluator {
public:
    explicit NonlinearEvaluator(GridPtr grid);

    /// -div_L(U N) - kappa div_L(N grad_L C) and -div_L(U Omega) + kappa curl_L(N grad_L C),
    /// dealiased, at simulation time t.
    NonlinearTerms operator()(const SpectralField& n, const SpectralField& omega, double t, const PhysParams& params,
                              const Switches& sw);

private:
    GridPtr grid_;
    std::vector<Complex> spec_a_, spec_b_, spec_c_, spec_d_, spec_e_, spec_f_;
    std::vector<Complex> phys_n_, phys_w_, phys_u1_, phys_u2_, phys_cz_, phys_cy_;
};

NonlinearTerms rhs_nonlinear(const SimState& state, const Switches& sw);

struct StepResult {
    SimState state;
    bool finite = true;
    double dt = 0.0;
};

/// Time-step settings. dt = min(cfl / transport_rate, ed_fraction * kappa^{-1/3},
/// reaction / (kappa sup N), dt_max).
struct StepControl {
    double dt_max = 0.01;
    double cfl = 0.4;
    double ed_fraction = 0.05;
    double reaction = 0.5;
};

/// Integrating-factor Heun stepper: the diffusion kappa Delta_L / nu Delta_L is integrated exactly,
/// the nonlinear terms with the two-stage trapezoidal predictor-corrector.
class Stepper {
public:
    Stepper(GridPtr grid, Switches sw, StepControl control = {});

    /// One step of exactly `dt`.
    StepResult step(const SimState& state, double dt);

    /// One step with dt = min(stable dt, dt_cap).
    StepResult advance(const SimState& state, double dt_cap);

    double stable_dt(const NonlinearTerms& terms, const PhysParams& params) const;

    const Switches& switches() const { return sw_; }

private:
    StepResult heun(const SimState& state, const NonlinearTerms& f0, double dt);

    GridPtr grid_;
    Switches sw_;
    StepControl control_;
    NonlinearEvaluator eval_;
};

/// Convenience wrapper around a fresh Stepper.
StepResult step(const SimState& state, double dt, const Switches& sw);

enum class RunStatus { completed, blowup, resolution_exceeded, mass_leak };

std::string to_string(RunStatus status);
RunStatus run_status_from_string(const std::string& name);

struct BlowupVerdict {
    RunStatus status = RunStatus::completed;
    double t_stop = 0.0;
    double peak_sup = 0.0;
    double tail_fraction = 0.0;
    std::string trigger;  // "sup_growth", "spectral_tail", "non_finite", or the non-blowup reason
};

struct DetectorSettings {
    double blowup_factor = 1e4;
    double tail_threshold = 0.1;
};

struct DetectorHistory {
    double initial_sup = 0.0;
    double peak_sup = 0.0;
};

/// Share of N's energy (excluding the mean) in the outer third of the retained shell,
/// max(|k|/k_cut, |j|/j_cut) > 2/3.
double spectral_tail_fraction(const SpectralField& n);

/// Fires on (a) sup N > blowup_factor * initial sup, (b) spectral tail share > tail_threshold,
/// (c) non-finite coefficients. Updates history.peak_sup.
std::optional<BlowupVerdict> detect_blowup(const SimState& state, DetectorHistory& history,
                                           const DetectorSettings& settings = {});

/// Largest |k| whose mode energy exceeds rel_tol times the field's total energy (0 if none).
int active_k_max(const SpectralField& f, double rel_tol = 1e-12);

/// eta_max / (2 k_active): the latest shear time the sheared grid resolves the active modes.
double secular_resolution_bound(const Grid& grid, int k_active);

}  // namespace pks
