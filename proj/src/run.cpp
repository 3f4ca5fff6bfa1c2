#include "pks/run.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pks {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

double sup_physical(const SpectralField& f) {
    const std::vector<double> v = f.to_physical();
    return *std::max_element(v.begin(), v.end());
}

}  // namespace

void RunConfig::validate() const {
    params.validate();
    (void)make_grid(grid.nx, grid.ny, grid.ly);
    require(t_max > 0.0 && std::isfinite(t_max), "t_max must be a positive finite time");
    require(out_interval > 0.0 && out_interval <= t_max, "out_interval must lie in (0, t_max]");
    require(!blobs.empty() || params.mass == 0.0, "mass > 0 needs at least one blob");
    for (const Blob& b : blobs) {
        require(b.sigma > 0.0, "blob sigma must be > 0");
        require(b.mass >= 0.0, "blob mass must be >= 0");
    }
    require(control.dt_max > 0.0 && control.cfl > 0.0 && control.ed_fraction > 0.0 && control.reaction > 0.0,
            "step control parameters must be > 0");
    require(detector.blowup_factor > 1.0, "blowup_factor must be > 1");
    require(detector.tail_threshold > 0.0 && detector.tail_threshold < 1.0, "tail_threshold must lie in (0, 1)");
    require(mass_tolerance > 0.0, "mass_tolerance must be > 0");
    require(resolution_tolerance > 0.0 && resolution_tolerance < 1.0, "resolution_tolerance must lie in (0, 1)");
    require(checkpoint_every >= 0, "checkpoint_every must be >= 0");
    if (omega.kind == OmegaKind::mode || omega.kind == OmegaKind::threshold) {
        require(3 * std::abs(omega.k) <= grid.nx && 3 * std::abs(omega.eta_index) <= grid.ny,
                "omega mode lies outside the retained shell");
        require(omega.k != 0 || omega.eta_index != 0, "omega mode must not be the (0,0) mean");
    }
}

double RunConfig::total_mass() const {
    double m = 0.0;
    for (const Blob& b : blobs) m += b.mass;
    return m;
}

SimState initial_state(const RunConfig& config) {
    GridPtr grid = make_grid(config.grid.nx, config.grid.ny, config.grid.ly);
    SimState s;
    s.params = config.params;
    s.params.mass = config.total_mass();
    s.t = 0.0;
    s.n = gaussian_blobs(grid, config.blobs);
    s.omega = initial_vorticity(grid, config.omega, s.params, config.seed);
    return s;
}

std::vector<std::string> monitor_flags(const std::vector<DiagnosticsRecord>& history) {
    bool boundary = false, positivity = false, clamp = false;
    for (const DiagnosticsRecord& r : history) {
        boundary = boundary || r.boundary_mass_fraction > 1e-8;
        positivity = positivity || r.min_N < -1e-6 * r.sup_N;
        clamp = clamp || r.clamped_mass_fraction > 1e-4;
    }
    std::vector<std::string> flags;
    if (boundary) flags.push_back("boundary_mass");
    if (positivity) flags.push_back("positivity");
    if (clamp) flags.push_back("free_energy_clamp");
    return flags;
}

std::optional<RateFit> fit_mode_rate(const std::vector<DiagnosticsRecord>& history, int k, std::string* note) {
    if (k < 1 || k > 3) throw std::invalid_argument("fit_mode_rate: k must be 1, 2 or 3");
    std::vector<double> t, a;
    for (const DiagnosticsRecord& r : history) {
        t.push_back(r.t);
        a.push_back(r.mode_norm_N[k - 1]);
    }
    try {
        return fit_enhanced_dissipation_rate(t, a);
    } catch (const WindowTooShort& e) {
        if (note) *note = e.what();
        return std::nullopt;
    }
}

RunReport run(const RunConfig& config, const RunCallbacks& callbacks, const RunCheckpoint* resume) {
    config.validate();
    const Switches& sw = config.switches;
    const SimState initial = initial_state(config);
    GridPtr grid = initial.n.grid;
    Stepper stepper(grid, sw, config.control);

    RunReport report;
    {
        const int k0 = std::max(active_k_max(initial.n, config.resolution_tolerance),
                                active_k_max(initial.omega, config.resolution_tolerance));
        report.resolution_bound_initial = secular_resolution_bound(*grid, k0);
    }

    RunCheckpoint ck;
    if (resume) {
        ck = *resume;
        if (ck.state.n.grid->nx != grid->nx || ck.state.n.grid->ny != grid->ny || ck.state.n.grid->ly != grid->ly)
            throw std::invalid_argument("checkpoint grid does not match the config");
        ck.state.n.grid = grid;
        ck.state.omega.grid = grid;
        BootstrapAccumulator acc(sw);
        acc.restore(ck.accumulator.time(), ck.accumulator.last(), ck.accumulator.totals());
        ck.accumulator = acc;
    } else {
        ck.state = initial;
        ck.accumulator = BootstrapAccumulator(sw);
        ck.accumulator.reset(ck.state);
        ck.history.initial_sup = sup_physical(ck.state.n);
        ck.history.peak_sup = ck.history.initial_sup;
        ck.initial_mass = mass(ck.state.n);
    }

    auto emit = [&](const DiagnosticsRecord& r) {
        report.history.push_back(r);
        if (callbacks.on_record) callbacks.on_record(r);
    };
    if (!resume) emit(compute_record(ck.state, sw, ck.accumulator, 0.0));

    auto finish = [&](RunStatus status, const std::string& trigger) {
        report.verdict.status = status;
        report.verdict.t_stop = ck.state.t;
        report.verdict.peak_sup = ck.history.peak_sup;
        report.verdict.tail_fraction = spectral_tail_fraction(ck.state.n);
        report.verdict.trigger = trigger;
    };

    const double m0 = ck.initial_mass;
    const double mass_scale = std::max(std::abs(m0), 1e-300);
    bool stopped = false;
    while (!stopped) {
        const double target = std::min(static_cast<double>(ck.next_output) * config.out_interval, config.t_max);
        const double snap = 1e-12 * std::max(1.0, std::abs(target));
        while (target - ck.state.t > snap) {
            if (callbacks.abort_after_steps >= 0 && ck.steps >= callbacks.abort_after_steps)
                throw RunAborted("run aborted after " + std::to_string(ck.steps) + " steps");
            const double remaining = target - ck.state.t;
            StepResult r = stepper.advance(ck.state, remaining);
            ++ck.steps;
            if (!r.finite) {
                report.verdict.status = RunStatus::blowup;
                report.verdict.t_stop = r.state.t;
                report.verdict.peak_sup = ck.history.peak_sup;
                report.verdict.tail_fraction = spectral_tail_fraction(ck.state.n);
                report.verdict.trigger = "non_finite";
                stopped = true;
                break;
            }
            if (target - r.state.t <= snap) {
                r.state.t = target;
                const double tau = shear_time(target, sw);
                r.state.n.time = tau;
                r.state.omega.time = tau;
            }
            ck.state = std::move(r.state);
            ck.last_dt = r.dt;
            ck.accumulator.advance(ck.state);

            if (std::abs(mass(ck.state.n) - m0) > config.mass_tolerance * mass_scale && std::abs(m0) > 0.0) {
                finish(RunStatus::mass_leak, "mass_leak");
                emit(compute_record(ck.state, sw, ck.accumulator, ck.last_dt));
                stopped = true;
                break;
            }
            if (auto v = detect_blowup(ck.state, ck.history, config.detector)) {
                report.verdict = *v;
                emit(compute_record(ck.state, sw, ck.accumulator, ck.last_dt));
                stopped = true;
                break;
            }
        }
        if (stopped) break;

        emit(compute_record(ck.state, sw, ck.accumulator, ck.last_dt));
        ++ck.next_output;

        if (config.check_resolution && sw.couette && sw.nonlinear) {
            const int k_act = std::max(active_k_max(ck.state.n, config.resolution_tolerance),
                                       active_k_max(ck.state.omega, config.resolution_tolerance));
            if (shear_time(ck.state.t, sw) > secular_resolution_bound(*grid, k_act)) {
                finish(RunStatus::resolution_exceeded, "k_active=" + std::to_string(k_act));
                break;
            }
        }
        if (ck.state.t >= config.t_max - snap) {
            finish(RunStatus::completed, "");
            break;
        }
        if (callbacks.on_checkpoint && config.checkpoint_every > 0 &&
            (ck.next_output - 1) % config.checkpoint_every == 0)
            callbacks.on_checkpoint(ck);
    }
    if (callbacks.on_checkpoint) callbacks.on_checkpoint(ck);

    report.steps = ck.steps;
    report.flags = monitor_flags(report.history);
    report.final_state = ck.state;
    report.rate_k1 = fit_mode_rate(report.history, 1, &report.rate_k1_note);
    return report;
}

}  // namespace pks
