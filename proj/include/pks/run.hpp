#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pks/diagnostics.hpp"
#include "pks/dynamics.hpp"
#include "pks/initial_data.hpp"

namespace pks {

struct GridSpec {
    int nx = 128;
    int ny = 256;
    double ly = 16.0 * kPi;
};

struct RunConfig {
    std::string name = "run";
    GridSpec grid;
    PhysParams params;
    std::vector<Blob> blobs{Blob{}};
    OmegaSpec omega;
    Switches switches;
    double t_max = 10.0;
    double out_interval = 0.1;
    StepControl control;
    DetectorSettings detector;
    std::uint64_t seed = 0;
    double mass_tolerance = 1e-8;          // relative drift that triggers mass_leak
    double resolution_tolerance = 1e-12;   // energy share defining the active |k|
    bool check_resolution = true;
    int checkpoint_every = 10;             // output rows between checkpoints; 0 disables

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    double total_mass() const;
};

/// Everything needed to continue a run bit-for-bit.
struct RunCheckpoint {
    SimState state;
    BootstrapAccumulator accumulator;
    DetectorHistory history;
    double initial_mass = 0.0;
    std::int64_t steps = 0;
    std::int64_t next_output = 1;  // index m of the next output time m * out_interval
    double last_dt = 0.0;
};

struct RunReport {
    std::vector<DiagnosticsRecord> history;
    BlowupVerdict verdict;
    double resolution_bound_initial = 0.0;  // eta_max / (2 k_active) at t = 0
    std::int64_t steps = 0;
    SimState final_state;
    std::optional<RateFit> rate_k1;
    std::string rate_k1_note;
    /// Monitors that tripped at some output time: "boundary_mass" (mass share in |y| > 0.4 Ly
    /// above 1e-8), "positivity" (min N < -1e-6 sup N), "free_energy_clamp".
    std::vector<std::string> flags;
};

struct RunCallbacks {
    std::function<void(const DiagnosticsRecord&)> on_record;
    std::function<void(const RunCheckpoint&)> on_checkpoint;
    /// Stops the run (without a verdict) once this many steps have been taken; for interruption tests.
    std::int64_t abort_after_steps = -1;
};

/// Thrown when RunCallbacks::abort_after_steps is reached.
class RunAborted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Initial state built from the config's blobs and vorticity spec.
SimState initial_state(const RunConfig& config);

/// Integrates to t_max or until a verdict fires, emitting a record every out_interval.
/// With `resume`, continues from the checkpoint instead of the initial data.
RunReport run(const RunConfig& config, const RunCallbacks& callbacks = {}, const RunCheckpoint* resume = nullptr);

/// Monitor flags (see RunReport::flags) tripped anywhere in `history`.
std::vector<std::string> monitor_flags(const std::vector<DiagnosticsRecord>& history);

/// Fit of the k = 1 cell-density mode over a run's history; nullopt with a reason when the
/// window is too short.
std::optional<RateFit> fit_mode_rate(const std::vector<DiagnosticsRecord>& history, int k, std::string* note = nullptr);

}  // namespace pks
