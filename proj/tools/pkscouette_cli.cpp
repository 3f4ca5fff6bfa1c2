// Command-line front end: run, sweep, verify-multipliers, plot, resume.
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "pks/harness/config.hpp"
#include "pks/harness/lemma_report.hpp"
#include "pks/harness/plot.hpp"
#include "pks/harness/run_single.hpp"
#include "pks/harness/sweep.hpp"

namespace fs = std::filesystem;
using namespace pks;
using namespace pks::harness;

namespace {

fs::path locate_config(const std::string& arg) {
    if (fs::exists(arg)) return arg;
    if (fs::path p = preset_path(arg); !p.empty()) return p;
    throw ConfigError("config file or preset '" + arg + "' not found");
}

void print_verdict(const RunOutcome& out) {
    const BlowupVerdict& v = out.report.verdict;
    std::printf("verdict: %s  t_stop=%.6g  peak_sup=%.6g  tail_fraction=%.3g%s%s\n", to_string(v.status).c_str(),
                v.t_stop, v.peak_sup, v.tail_fraction, v.trigger.empty() ? "" : "  trigger=", v.trigger.c_str());
    if (out.report.rate_k1)
        std::printf("rate_k1: %.6g over t in [%.4g, %.4g] (%.2f decades)\n", out.report.rate_k1->rate,
                    out.report.rate_k1->t_begin, out.report.rate_k1->t_end, out.report.rate_k1->decades);
    else if (!out.report.rate_k1_note.empty())
        std::printf("rate_k1: n/a (%s)\n", out.report.rate_k1_note.c_str());
    std::printf("output: %s\n", out.dir.string().c_str());
}

int lemma_verb(const LemmaConfig& cfg, const fs::path& dir) {
    std::printf("multiplier lemma suite: %d samples per iota, t in [0, %g], |k| <= %d, |eta|, |xi| <= %g\n",
                cfg.samples, cfg.ranges.t_max, cfg.ranges.k_max, cfg.ranges.eta_max);
    const LemmaRun r = run_lemma_to(cfg, dir);
    for (const InequalityReport& e : r.report.entries)
        std::printf("  %-26s iota=%-5g samples=%-7ld violations=%-4ld worst_margin=%.3e%s\n", e.inequality_id.c_str(),
                    e.iota, e.samples, e.violations, e.worst_margin, e.gating ? "" : "  (informational)");
    for (const CommutatorStudy& c : r.commutator)
        std::printf("  commutator s=%d iota=%g: %.4g -> %.4g with doubled ranges (ratio %.3f)\n", c.s, c.iota,
                    c.base.value, c.doubled.value, c.ratio());
    const long bad = r.report.gating_violations();
    std::printf("gating violations: %ld  (%.1f s)  report: %s\n", bad, r.seconds,
                (dir / "lemma_report.json").string().c_str());
    return bad == 0 ? 0 : 1;
}

int sweep_verb(const ParsedConfig& cfg, const fs::path& dir, bool force, bool resume, int workers) {
    SweepConfig sweep = cfg.sweep;
    if (workers > 0) sweep.workers = workers;
    const auto cells = expand_sweep(sweep);
    std::printf("sweep: %zu cells, %d worker(s), output %s\n", cells.size(), sweep.workers, dir.string().c_str());
    const SweepResult r = run_sweep(sweep, dir, force, resume, resolved_config_toml(cfg));
    for (const SweepRow& row : r.rows)
        std::printf("  cell-%s  %-20s t_stop=%-10.4g %s\n", row.cell.hash.c_str(), row.verdict.c_str(), row.t_stop,
                    row.message.c_str());
    std::printf("executed %zu, reused %zu, failed %zu; summary: %s\n", r.executed, r.rows.size() - r.executed,
                r.failed, (dir / kSweepSummaryFile).string().c_str());
    return r.failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chemotaxis-fluid simulator near Couette flow"};
    app.require_subcommand(1);

    std::string config_arg, dir_arg, output_arg;
    bool force = false, resume_flag = false;
    int samples = 100000, workers = 0;
    std::uint64_t seed = 1;

    auto* run_cmd = app.add_subcommand("run", "integrate one configuration (file path or preset name)");
    run_cmd->add_option("config", config_arg, "TOML config or preset name")->required();
    run_cmd->add_flag("--force", force, "overwrite an existing output directory");
    run_cmd->add_option("--output", output_arg, "output directory (overrides the config)");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
    sweep_cmd->add_option("config", config_arg, "TOML sweep config or preset name")->required();
    sweep_cmd->add_flag("--force", force, "overwrite an existing sweep");
    sweep_cmd->add_flag("--resume", resume_flag, "reuse finished cells");
    sweep_cmd->add_option("--workers", workers, "concurrent cells");
    sweep_cmd->add_option("--output", output_arg, "output directory (overrides the config)");

    auto* verify_cmd = app.add_subcommand("verify-multipliers", "randomized check of the multiplier inequalities");
    verify_cmd->add_option("--samples", samples, "samples per iota")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", seed, "random seed");
    verify_cmd->add_option("--output", output_arg, "directory for lemma_report.json");

    auto* plot_cmd = app.add_subcommand("plot", "write SVG plots for a run or sweep directory");
    plot_cmd->add_option("dir", dir_arg, "run or sweep directory")->required();

    auto* resume_cmd = app.add_subcommand("resume", "continue an interrupted run or sweep");
    resume_cmd->add_option("dir", dir_arg, "run or sweep directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd || *sweep_cmd) {
            ParsedConfig cfg = parse_config(locate_config(config_arg));
            if (!output_arg.empty()) cfg.output_dir = output_arg;
            const fs::path dir = resolve_output_dir(cfg);
            if (cfg.kind == ConfigKind::lemma) return lemma_verb(cfg.lemma, dir);
            if (cfg.kind == ConfigKind::sweep) {
                if (*run_cmd) std::printf("note: sweep config given to run; running the sweep\n");
                return sweep_verb(cfg, dir, force || cfg.force, resume_flag, workers);
            }
            if (*sweep_cmd) throw ConfigError("config has no [sweep] section");
            const RunConfig& rc = cfg.run;
            std::printf("run %s: %dx%d grid, Ly=%.6g, kappa=%g nu=%g epsilon=%g M=%g, t_max=%g, couette %s\n",
                        rc.name.c_str(), rc.grid.nx, rc.grid.ny, rc.grid.ly, rc.params.kappa, rc.params.nu,
                        rc.params.epsilon, rc.total_mass(), rc.t_max, rc.switches.couette ? "on" : "off");
            const RunOutcome out = run_single(rc, dir, force || cfg.force);
            print_verdict(out);
            return exit_code(out.report.verdict.status);
        }
        if (*verify_cmd) {
            LemmaConfig cfg;
            cfg.samples = samples;
            cfg.seed = seed;
            const fs::path dir = output_arg.empty() ? output_root() / "lemma-verify" : fs::path(output_arg);
            return lemma_verb(cfg, dir);
        }
        if (*plot_cmd) {
            for (const fs::path& p : plot_dir(dir_arg)) std::printf("wrote %s\n", p.string().c_str());
            return 0;
        }
        if (*resume_cmd) {
            const fs::path dir(dir_arg);
            if (fs::exists(dir / kSweepSummaryFile)) {
                const ParsedConfig cfg = parse_config(dir / kResolvedConfigFile);
                return sweep_verb(cfg, dir, false, true, 0);
            }
            const RunOutcome out = resume_run(dir);
            print_verdict(out);
            return exit_code(out.report.verdict.status);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
