// Acceptance runner: one PASS/FAIL line per criterion. Exit status 0 only if all pass.
//
//   pks_acceptance [--only 1,3,...] [--output DIR]

#include <chrono>
#include <complex>
#include <filesystem>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>

#include "multiplier_oracle.hpp"
#include "pks/harness/config.hpp"
#include "pks/harness/lemma_report.hpp"
#include "pks/harness/output.hpp"
#include "pks/harness/run_single.hpp"
#include "pks/lemma_suite.hpp"
#include "pks/run.hpp"

using namespace pks;
using namespace pks::harness;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

RunConfig preset_run(const std::string& name) {
    const fs::path p = preset_path(name);
    if (p.empty()) throw std::runtime_error("preset " + name + " not found");
    ParsedConfig c = parse_config(p);
    if (c.kind != ConfigKind::run) throw std::runtime_error("preset " + name + " is not a single run");
    return c.run;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// closed-form shear-diffusion factor for one coefficient, written out independently
long double exact_factor(double kappa, double k, double eta, double t) {
    const long double K = k, E = eta, T = t;
    long double integral;
    if (k == 0.0) integral = (K * K + E * E) * T;
    else integral = K * K * T + (E * E * E - (E - K * T) * (E - K * T) * (E - K * T)) / (3.0L * K);
    return std::exp(-static_cast<long double>(kappa) * integral);
}

Outcome criterion1(const fs::path&) {
    const auto t0 = Clock::now();
    const LemmaReport r = verify_lemma_suite(100000, LemmaRanges{200.0, 64, 256.0}, {1.0, 0.1, 0.01}, 20240601, 1e-9);
    const double secs = seconds_since(t0);
    std::string ids;
    std::set<std::string> seen;
    for (const auto& e : r.entries)
        if (e.gating) {
            if (seen.insert(e.inequality_id).second) ids += (ids.empty() ? "" : " ") + e.inequality_id;
        }
    const long v = r.gating_violations();
    return {v == 0 && seen.size() == 6 && secs < 30.0,
            fmt("%ld violations over 6 inequalities x 3 iotas x 1e5 samples (%s) in %.2f s", v, ids.c_str(), secs)};
}

Outcome criterion2(const fs::path&) {
    const test::DerivativeCheck c = test::check_derivatives(10000, 99);
    return {c.failures == 0 && c.samples == 10000,
            fmt("%ld/%ld points off; worst rel. error dt %.2e, deta %.2e", c.failures, c.samples, c.worst_dt,
                c.worst_deta)};
}

Outcome criterion3(const fs::path&) {
    RunConfig cfg = preset_run("linear-oracle");
    cfg.checkpoint_every = 1;
    const SimState s0 = initial_state(cfg);
    const Grid& g = *s0.n.grid;
    double worst = 0.0;
    long compared = 0, skipped = 0;
    int snapshots = 0;
    RunCallbacks cb;
    cb.on_checkpoint = [&](const RunCheckpoint& ck) {
        ++snapshots;
        const double t = ck.state.t;
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                if (!g.retained(i, j) || g.nyquist(i, j)) continue;
                const std::complex<long double> exact =
                    std::complex<long double>(s0.n(i, j)) * exact_factor(cfg.params.kappa, g.kz[i], g.ky[j], t);
                const long double mag = std::abs(exact);
                if (mag < 1e-290L) {  // denormal range: no relative precision left
                    ++skipped;
                    continue;
                }
                const std::complex<long double> got(ck.state.n(i, j));
                worst = std::max(worst, static_cast<double>(std::abs(got - exact) / mag));
                ++compared;
            }
    };
    const auto t0 = Clock::now();
    const RunReport r = run(cfg, cb);
    const double secs = seconds_since(t0);
    const bool ok = r.verdict.status == RunStatus::completed && r.verdict.t_stop == cfg.t_max && worst <= 1e-6 &&
                    snapshots >= 100 && secs < 60.0;
    return {ok, fmt("%dx%d, kappa=%g, t in [0,%g]: worst rel. error %.2e over %ld coefficient samples at %d times "
                    "(%ld below 1e-290 skipped), %.1f s",
                    g.nx, g.ny, cfg.params.kappa, cfg.t_max, worst, compared, snapshots, skipped, secs)};
}

Outcome criterion4(const fs::path&) {
    double rates[2] = {0, 0};
    const double kappas[2] = {1e-2, 1e-3};
    std::string detail;
    bool ok = true;
    for (int n = 0; n < 2; ++n) {
        RunConfig cfg;
        cfg.name = "scaling";
        cfg.grid = {32, 512, 16.0 * kPi};
        cfg.params = PhysParams::from_kappa_nu(kappas[n], 1.0, 1.0, 0);
        cfg.switches = Switches{true, false, false, false};
        cfg.blobs = {Blob{1.0, kPi, 0.0, 2.0}};
        cfg.t_max = n == 0 ? 40.0 : 85.0;
        cfg.out_interval = 0.1;
        const RunReport r = run(cfg);
        if (!r.rate_k1) {
            ok = false;
            detail += fmt("kappa=%g: no fit (%s); ", kappas[n], r.rate_k1_note.c_str());
            continue;
        }
        rates[n] = r.rate_k1->rate;
        const double bound = enhanced_dissipation_bound(kappas[n], kDeltaMax, 1);
        ok = ok && rates[n] >= bound;
        detail += fmt("kappa=%g: rate %.4f over [%.1f, %.1f] (%.1f decades), bound %.2e; ", kappas[n], rates[n],
                      r.rate_k1->t_begin, r.rate_k1->t_end, r.rate_k1->decades, bound);
    }
    const double ratio = rates[1] > 0.0 ? rates[0] / rates[1] : 0.0;
    ok = ok && ratio >= 1.7 && ratio <= 2.8;
    return {ok, detail + fmt("ratio %.4f (ideal %.4f, allowed [1.7, 2.8])", ratio, std::cbrt(10.0))};
}

Outcome criterion5(const fs::path&) {
    RunConfig cfg;
    cfg.name = "subcritical";
    cfg.grid = {64, 256, 8.0 * kPi};
    cfg.params = PhysParams::from_kappa_nu(1.0, 1.0, 5.0, 5);
    cfg.blobs = {Blob{5.0, kPi, 0.0, 0.5}};
    cfg.switches = Switches{false, true, true, true};
    cfg.omega = OmegaSpec{OmegaKind::mode, 1, 1, 0.1};
    cfg.t_max = 5.0;
    cfg.out_interval = 0.01;
    const RunReport r = run(cfg);
    const auto& h = r.history;
    const double m0 = h.front().mass;
    double drift = 0.0, worst_pos = 0.0, worst_F = -1e300, worst_E = -1e300;
    const double F0 = std::abs(h.front().free_energy_F);
    bool mono = true;
    for (std::size_t i = 0; i < h.size(); ++i) {
        drift = std::max(drift, std::abs(h[i].mass - m0) / m0);
        worst_pos = std::max(worst_pos, -h[i].min_N / h[i].sup_N);
        if (i == 0) continue;
        const double tol = 1e-6 * F0 + 10.0 * h[i].dt * h[i].dt;
        const double dF = h[i].free_energy_F - h[i - 1].free_energy_F;
        const double dE = h[i].energy_E - h[i - 1].energy_E;
        worst_F = std::max(worst_F, dF - tol);
        worst_E = std::max(worst_E, dE - tol);
        mono = mono && dF <= tol && dE <= tol;
    }
    const bool ok = r.verdict.status == RunStatus::completed && drift <= 1e-8 && worst_pos <= 1e-6 && mono;
    return {ok, fmt("M=5, kappa=nu=1, no shear, t=%g (%s): mass drift %.1e, max(-min N/sup N) %.1e, "
                    "F %.4f -> %.4f, E %.4f -> %.4f, worst increase beyond tolerance F %.1e E %.1e",
                    r.verdict.t_stop, to_string(r.verdict.status).c_str(), drift, worst_pos,
                    h.front().free_energy_F, h.back().free_energy_F, h.front().energy_E, h.back().energy_E, worst_F,
                    worst_E)};
}

// criteria 6 and 7 share the suppression run
struct Dichotomy {
    bool done = false;
    RunReport blowup, suppression;
    RunConfig blowup_cfg, suppression_cfg;
    double seconds = 0.0;
    std::string error;
};

Dichotomy& dichotomy(const fs::path& out) {
    static Dichotomy d;
    if (d.done) return d;
    d.done = true;
    try {
        const auto t0 = Clock::now();
        d.blowup_cfg = preset_run("blowup-noshear");
        d.suppression_cfg = preset_run("suppression-couette");
        d.blowup = run_single(d.blowup_cfg, out / "blowup-noshear", true).report;
        d.suppression = run_single(d.suppression_cfg, out / "suppression-couette", true).report;
        d.seconds = seconds_since(t0);
    } catch (const std::exception& e) {
        d.error = e.what();
    }
    return d;
}

Outcome criterion6(const fs::path& out) {
    Dichotomy& d = dichotomy(out);
    if (!d.error.empty()) return {false, d.error};
    const RunConfig& b = d.blowup_cfg;
    const RunConfig& s = d.suppression_cfg;
    const bool same_data = b.blobs.size() == s.blobs.size() && b.blobs[0].mass == s.blobs[0].mass &&
                           b.blobs[0].sigma == s.blobs[0].sigma && b.grid.nx == s.grid.nx &&
                           b.grid.ny == s.grid.ny && b.grid.ly == s.grid.ly;
    const bool blew = d.blowup.verdict.status == RunStatus::blowup && d.blowup.verdict.t_stop < 1.0;
    const auto& h = d.suppression.history;
    double peak = 0.0;
    for (const auto& r : h) peak = std::max(peak, r.sup_N);
    const double sup0 = h.front().sup_N;
    const double bound = enhanced_dissipation_bound(s.params.kappa, s.params.delta, 1);
    const bool completed = d.suppression.verdict.status == RunStatus::completed && h.back().t == 20.0;
    const double rate = d.suppression.rate_k1 ? d.suppression.rate_k1->rate : 0.0;
    const bool ok = same_data && b.params.kappa == 1.0 && !b.switches.couette && blew && s.switches.couette &&
                    completed && peak <= 2.0 * sup0 && d.suppression.rate_k1 && rate >= bound && d.seconds < 600.0;
    return {ok, fmt("M=%g: no shear -> %s at t=%.3f (%s, peak %.1f); Couette eps=%g (kappa=%g, nu=%g) -> %s at t=%g, "
                    "peak sup %.2f = %.2fx initial, k=1 rate %.4f vs bound %.2e; %.0f s",
                    b.total_mass(), to_string(d.blowup.verdict.status).c_str(), d.blowup.verdict.t_stop,
                    d.blowup.verdict.trigger.c_str(), d.blowup.verdict.peak_sup, s.params.epsilon, s.params.kappa,
                    s.params.nu, to_string(d.suppression.verdict.status).c_str(), d.suppression.verdict.t_stop, peak,
                    peak / sup0, rate, bound, d.seconds)};
}

Outcome criterion7(const fs::path& out) {
    Dichotomy& d = dichotomy(out);
    if (!d.error.empty()) return {false, d.error};
    const auto& h = d.suppression.history;
    bool finite = !h.empty();
    for (const auto& r : h)
        for (double v : r.hypotheses) finite = finite && std::isfinite(v);
    double last_rise_n = 0.0, last_rise_w = 0.0;
    for (std::size_t i = 1; i < h.size(); ++i) {
        if (h[i].norm_AkappaN_neq > h[i - 1].norm_AkappaN_neq * (1 + 1e-12)) last_rise_n = h[i].t;
        if (h[i].norm_AnuOmega_neq > h[i - 1].norm_AnuOmega_neq * (1 + 1e-12)) last_rise_w = h[i].t;
    }
    const double allowed = 5.0 / std::cbrt(d.suppression_cfg.params.kappa);
    const bool ok = finite && last_rise_n <= allowed && last_rise_w <= allowed;
    const auto& H = h.back().hypotheses;
    return {ok, fmt("hypotheses finite: %s (final %.3e %.3e %.3e %.3e); last increase of ||A_k N_neq|| at t=%.1f, "
                    "of ||A_nu Omega_neq|| at t=%.1f; allowed transient 5 kappa^-1/3 = %.1f",
                    finite ? "yes" : "no", H[0], H[1], H[2], H[3], last_rise_n, last_rise_w, allowed)};
}

Outcome criterion8(const fs::path& out) {
    const RunConfig cfg = preset_run("linear-oracle");
    const RunOutcome a = run_single(cfg, out / "determinism-a", true);
    const RunOutcome b = run_single(cfg, out / "determinism-b", true);
    const bool identical = slurp(out / "determinism-a" / kTimeseriesFile) ==
                           slurp(out / "determinism-b" / kTimeseriesFile);

    RunCallbacks cb;
    cb.abort_after_steps = a.report.steps / 2 + 7;
    const fs::path cdir = out / "determinism-resume";
    bool aborted = false;
    try {
        run_single(cfg, cdir, true, cb);
    } catch (const RunAborted&) {
        aborted = true;
    }
    const RunOutcome c = resume_run(cdir);
    const double scale = max_abs(a.report.final_state.n);
    const double diff = max_abs(c.report.final_state.n - a.report.final_state.n) / scale;
    const double tdiff = std::abs(c.report.final_state.t - a.report.final_state.t);
    const bool ok = identical && aborted && diff <= 1e-12 && tdiff <= 1e-12 && c.history.size() == a.history.size();
    return {ok, fmt("repeat CSV byte-identical: %s; killed after %lld steps and resumed: final-state rel. diff %.1e, "
                    "rows %zu vs %zu",
                    identical ? "yes" : "no", static_cast<long long>(cb.abort_after_steps), diff, c.history.size(),
                    a.history.size())};
}

Outcome criterion9(const fs::path& out) {
    LemmaConfig cfg;
    cfg.samples = 1;  // only the commutator study is needed here
    const LemmaRun r = run_lemma_to(cfg, out / "lemma");
    bool ok = true;
    std::string detail;
    for (const auto& c : r.commutator) {
        ok = ok && c.saturated();
        detail += fmt("s=%d iota=%g: %.3f -> %.3f (x%.3f); ", c.s, c.iota, c.base.value, c.doubled.value, c.ratio());
    }
    return {ok && !r.commutator.empty(), detail + "change < 2x required"};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    fs::path out;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string item;
            while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
        } else if (a == "--output" && i + 1 < argc) {
            out = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--only 1,2,...] [--output DIR]\n", argv[0]);
            return 1;
        }
    }
    if (out.empty()) out = fs::temp_directory_path() / ("pks-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(out);

    const std::pair<const char*, std::function<Outcome(const fs::path&)>> criteria[] = {
        {"multiplier lemma suite", criterion1},
        {"analytic derivatives vs central differences", criterion2},
        {"linear enhanced-dissipation oracle", criterion3},
        {"kappa^(1/3) scaling of the k=1 decay rate", criterion4},
        {"conservation, positivity, free-energy decay", criterion5},
        {"blowup/suppression dichotomy", criterion6},
        {"bootstrap functional boundedness", criterion7},
        {"determinism and resume", criterion8},
        {"commutator constant saturation", criterion9},
    };
    int failed = 0;
    for (int n = 1; n <= 9; ++n) {
        if (!only.empty() && !only.count(n)) continue;
        const auto& [name, fn] = criteria[n - 1];
        Outcome o;
        const auto t0 = Clock::now();
        try {
            o = fn(out);
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("criterion %d %s: %s [%s] (%.1f s)\n", n, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("artifacts: %s\n", out.c_str());
    return failed == 0 ? 0 : 1;
}
