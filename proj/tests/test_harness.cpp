#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "pks/harness/checkpoint.hpp"
#include "pks/harness/config.hpp"
#include "pks/harness/lemma_report.hpp"
#include "pks/harness/output.hpp"
#include "pks/harness/plot.hpp"
#include "pks/harness/run_single.hpp"
#include "pks/harness/sweep.hpp"

using namespace pks;
using namespace pks::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("pks-test-" + std::to_string(::getpid()) + "-" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig small_run() {
    RunConfig c;
    c.name = "small";
    c.grid = {32, 64, 8.0 * kPi};
    c.params = PhysParams::from_kappa_nu(0.1, 0.5, 4.0, 2);
    c.blobs = {Blob{4.0, kPi, 0.0, 1.0}};
    c.omega = OmegaSpec{OmegaKind::mode, 1, 2, 0.05};
    c.t_max = 1.0;
    c.out_interval = 0.05;
    c.checkpoint_every = 4;
    c.check_resolution = false;
    return c;
}

struct EnvGuard {
    std::string name;
    std::string old;
    bool had;
    EnvGuard(const char* n, const std::string& value) : name(n) {
        const char* o = std::getenv(n);
        had = o != nullptr;
        if (had) old = o;
        ::setenv(n, value.c_str(), 1);
    }
    ~EnvGuard() {
        if (had) ::setenv(name.c_str(), old.c_str(), 1);
        else ::unsetenv(name.c_str());
    }
};

}  // namespace

TEST_CASE("parse_config examples") {
    SUBCASE("minimal config fills defaults") {
        const ParsedConfig c = parse_config_string("[paper]\nM = 10\nkappa = 1\n[switches]\nshear = false\n");
        CHECK(c.kind == ConfigKind::run);
        CHECK(c.run.grid.nx == 128);
        CHECK(c.run.grid.ny == 256);
        CHECK(c.run.grid.ly == doctest::Approx(16.0 * kPi));
        CHECK(c.run.params.kappa == 1.0);
        CHECK(c.run.params.nu == 1.0);
        CHECK(c.run.params.epsilon == 1.0);
        CHECK(c.run.params.delta == doctest::Approx(1.0 / (16.0 * kPi * kPi)));
        CHECK(c.run.total_mass() == 10.0);
        CHECK(c.run.blobs.front().sigma == 0.5);
        CHECK(!c.run.switches.couette);
        CHECK(c.run.switches.chemotaxis);
    }
    SUBCASE("kappa above nu") {
        try {
            parse_config_string("[paper]\nkappa = 0.1\nnu = 0.01\n");
            FAIL("expected an error");
        } catch (const ConfigError& e) {
            const std::string m = e.what();
            CHECK(m.find("kappa") != std::string::npos);
            CHECK(m.find("nu") != std::string::npos);
            CHECK(m.find("kappa <= nu") != std::string::npos);
        }
    }
    SUBCASE("epsilon above one") {
        CHECK_THROWS_WITH_AS(parse_config_string("[paper]\nepsilon = 2.0\nnu = 0.5\n"),
                             doctest::Contains("epsilon"), ConfigError);
    }
    SUBCASE("inconsistent triple") {
        CHECK_THROWS_WITH_AS(parse_config_string("[paper]\nkappa = 0.1\nnu = 0.5\nepsilon = 0.5\n"),
                             doctest::Contains("epsilon * nu"), ConfigError);
    }
    SUBCASE("unknown key is named") {
        CHECK_THROWS_WITH_AS(parse_config_string("[paper]\nkapa = 0.1\n"), doctest::Contains("kapa"), ConfigError);
        CHECK_THROWS_WITH_AS(parse_config_string("[grid]\nnx = 15\n"), doctest::Contains("[grid]"), ConfigError);
    }
    SUBCASE("malformed toml") {
        CHECK_THROWS_AS(parse_config_string("[paper\nM = 1\n"), ConfigError);
    }
    SUBCASE("resolved config round trip") {
        const ParsedConfig c = parse_config_string(
            "name = \"rt\"\n[paper]\nepsilon = 0.05\nnu = 0.2\nM = 3\n[grid]\nnx = 32\nny = 64\nly_over_pi = 8\n"
            "[initial.omega]\nkind = \"threshold\"\nk = 1\neta_index = 1\n[time]\nt_max = 2\n");
        CHECK(c.run.params.kappa == doctest::Approx(0.01));
        const std::string first = resolved_config_toml(c);
        CHECK(first.find("[paper]") != std::string::npos);
        const ParsedConfig again = parse_config_string(first);
        CHECK(resolved_config_toml(again) == first);
    }
    SUBCASE("sweep and lemma kinds") {
        const ParsedConfig s = parse_config_string(
            "kind = \"sweep\"\n[paper]\nnu = 1\nkappa = 0.1\n[sweep]\nM = [1, 2]\nepsilon = [0.1, 0.2]\nworkers = 2\n");
        CHECK(s.kind == ConfigKind::sweep);
        CHECK(expand_sweep(s.sweep).size() == 4);
        const ParsedConfig l = parse_config_string("kind = \"lemma\"\n[lemma]\nsamples = 10\n");
        CHECK(l.kind == ConfigKind::lemma);
        CHECK(l.lemma.samples == 10);
    }
}

TEST_CASE("output root comes from the environment") {
    const fs::path root = scratch("root");
    EnvGuard env(kOutputRootEnv, root.string());
    ParsedConfig c = parse_config_string("name = \"abc\"\n");
    CHECK(resolve_output_dir(c) == root / "abc");
    c.output_dir = "/tmp/elsewhere";
    CHECK(resolve_output_dir(c) == fs::path("/tmp/elsewhere"));
    fs::remove_all(root);
}

TEST_CASE("shipped presets parse") {
    for (std::string name : {"lemma-verify", "linear-oracle", "blowup-noshear", "suppression-couette", "epsilon-sweep"}) {
        INFO(name);
        const fs::path p = preset_path(name);
        REQUIRE(!p.empty());
        CHECK_NOTHROW(parse_config(p));
    }
    CHECK(preset_path("no-such-preset").empty());
}

TEST_CASE("checkpoint encoding") {
    RunConfig cfg = small_run();
    RunCheckpoint ck;
    ck.state = initial_state(cfg);
    ck.state.t = 0.37;
    ck.state.n.time = ck.state.omega.time = 0.37;
    ck.accumulator = BootstrapAccumulator(cfg.switches);
    ck.accumulator.restore(0.37, BootstrapIntegrands{1, 2, 3, 4, 5}, BootstrapIntegrands{6, 7, 8, 9, 10});
    ck.history = {1.5, 2.5};
    ck.initial_mass = 4.0;
    ck.steps = 123;
    ck.next_output = 8;
    ck.last_dt = 0.00731;
    const std::vector<unsigned char> bytes = encode_checkpoint(ck);

    SUBCASE("little-endian length prefix and JSON header") {
        std::uint64_t len = 0;
        for (int i = 7; i >= 0; --i) len = (len << 8) | bytes[i];
        const std::string header(bytes.begin() + 8, bytes.begin() + 8 + static_cast<long>(len));
        const auto j = nlohmann::json::parse(header);
        CHECK(j.at("format") == "pks-checkpoint");
        CHECK(j.at("format_version") == 1);
        CHECK(j.at("grid").at("nx") == 32);
        CHECK(j.at("t").get<double>() == 0.37);
        const std::size_t payload = 2 * 2 * 8 * ck.state.n.coeffs.size();
        CHECK(bytes.size() >= 8 + len + payload);
    }
    SUBCASE("bit-exact round trip") {
        const RunCheckpoint back = decode_checkpoint(bytes);
        CHECK(back.state.t == ck.state.t);
        CHECK(back.state.n.coeffs == ck.state.n.coeffs);
        CHECK(back.state.omega.coeffs == ck.state.omega.coeffs);
        CHECK(back.state.params.kappa == ck.state.params.kappa);
        CHECK(back.accumulator.totals().w0_diss == 10.0);
        CHECK(back.accumulator.last().n_dtM == 1.0);
        CHECK(back.history.peak_sup == 2.5);
        CHECK(back.steps == 123);
        CHECK(back.next_output == 8);
        CHECK(back.last_dt == 0.00731);
        CHECK(encode_checkpoint(back) == bytes);
    }
    SUBCASE("corrupt input") {
        std::vector<unsigned char> cut(bytes.begin(), bytes.begin() + static_cast<long>(bytes.size() / 2));
        CHECK_THROWS(decode_checkpoint(cut));
        CHECK_THROWS(decode_checkpoint({1, 2, 3}));
    }
}

TEST_CASE("run_single: determinism, collision, resume") {
    const fs::path root = scratch("runs");
    const RunConfig cfg = small_run();
    const RunOutcome a = run_single(cfg, root / "a", false);
    const RunOutcome b = run_single(cfg, root / "b", false);
    CHECK(a.report.verdict.status == RunStatus::completed);
    CHECK(a.history.size() == 21);

    SUBCASE("rerun gives byte-identical CSV") {
        CHECK(slurp(root / "a" / kTimeseriesFile) == slurp(root / "b" / kTimeseriesFile));
        CHECK(fs::exists(root / "a" / kSummaryFile));
        CHECK(fs::exists(root / "a" / kResolvedConfigFile));
        CHECK(fs::exists(root / "a" / kCheckpointFile));
    }
    SUBCASE("collision without force") {
        CHECK_THROWS_AS(run_single(cfg, root / "a", false), OutputCollision);
        CHECK_NOTHROW(run_single(cfg, root / "a", true));
    }
    SUBCASE("interrupted run resumes to the same result") {
        RunCallbacks cb;
        cb.abort_after_steps = a.report.steps / 2;
        CHECK_THROWS_AS(run_single(cfg, root / "c", false, cb), RunAborted);
        CHECK(fs::exists(root / "c" / kCheckpointFile));
        CHECK(!fs::exists(root / "c" / kSummaryFile));
        const RunOutcome c = resume_run(root / "c");
        REQUIRE(c.history.size() == a.history.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < a.history.size(); ++i) {
            const auto va = record_values(a.history[i]);
            const auto vc = record_values(c.history[i]);
            for (std::size_t j = 0; j < va.size(); ++j)
                worst = std::max(worst, std::abs(va[j] - vc[j]) / std::max(1.0, std::abs(va[j])));
        }
        CHECK(worst <= 1e-12);
        const double d = max_abs(c.report.final_state.n - a.report.final_state.n);
        CHECK(d <= 1e-12 * max_abs(a.report.final_state.n));
        // a finished run resumes to its stored result
        const RunOutcome again = resume_run(root / "c");
        CHECK(again.report.verdict.status == RunStatus::completed);
    }
    SUBCASE("summary json") {
        std::ifstream in(root / "a" / kSummaryFile);
        const auto j = nlohmann::json::parse(in);
        CHECK(j.at("schema_version") == kSummarySchemaVersion);
        CHECK(j.at("verdict").at("status") == "completed");
        CHECK(j.at("paper").at("kappa").get<double>() == doctest::Approx(0.1));
        CHECK(j.at("fitted_rates").size() == 3);
        CHECK(j.at("rows") == 21);
    }
    fs::remove_all(root);
}

TEST_CASE("exit codes") {
    CHECK(exit_code(RunStatus::completed) == 0);
    CHECK(exit_code(RunStatus::blowup) == 2);
    CHECK(exit_code(RunStatus::mass_leak) == 1);
    CHECK(exit_code(RunStatus::resolution_exceeded) == 1);
}

TEST_CASE("sweeps") {
    const fs::path root = scratch("sweep");
    SweepConfig sw;
    sw.base = small_run();
    sw.base.t_max = 0.3;
    sw.base.out_interval = 0.1;
    sw.axes.mass = {2.0, 4.0};
    sw.axes.epsilon = {0.1, 0.2};
    sw.workers = 1;

    SUBCASE("2 x 2 sweep gives 4 rows in distinct directories") {
        const SweepResult r = run_sweep(sw, root / "serial", false, false);
        REQUIRE(r.rows.size() == 4);
        CHECK(r.executed == 4);
        CHECK(r.failed == 0);
        const CsvTable t = read_csv(root / "serial" / kSweepSummaryFile);
        CHECK(t.rows.size() == 4);
        CHECK(t.header == sweep_summary_columns());
        std::set<std::string> dirs;
        for (const auto& row : r.rows) {
            dirs.insert(row.cell.hash);
            CHECK(row.verdict == "completed");
            CHECK(fs::exists(root / "serial" / "cells" / ("cell-" + row.cell.hash) / kTimeseriesFile));
        }
        CHECK(dirs.size() == 4);

        SUBCASE("parallel execution matches serial per cell") {
            sw.workers = 3;
            const SweepResult p = run_sweep(sw, root / "parallel", false, false);
            for (const auto& row : p.rows) {
                const std::string cell = "cell-" + row.cell.hash;
                CHECK(slurp(root / "parallel" / "cells" / cell / kTimeseriesFile) ==
                      slurp(root / "serial" / "cells" / cell / kTimeseriesFile));
            }
            CHECK(slurp(root / "parallel" / kSweepSummaryFile) == slurp(root / "serial" / kSweepSummaryFile));
        }
        SUBCASE("resume reruns only missing cells") {
            fs::remove(root / "serial" / "cells" / ("cell-" + r.rows[1].cell.hash) / kSummaryFile);
            fs::remove_all(root / "serial" / "cells" / ("cell-" + r.rows[3].cell.hash));
            const SweepResult again = run_sweep(sw, root / "serial", false, true);
            CHECK(again.executed == 2);
            CHECK(!again.rows[0].executed);
            CHECK(again.rows[1].executed);
            CHECK(!again.rows[2].executed);
            CHECK(again.rows[3].executed);
            CHECK(read_csv(root / "serial" / kSweepSummaryFile).rows.size() == 4);
        }
        SUBCASE("existing sweep without force or resume") {
            CHECK_THROWS_AS(run_sweep(sw, root / "serial", false, false), OutputCollision);
        }
    }
    SUBCASE("invalid cells are recorded and the sweep continues") {
        sw.axes.epsilon = {0.1, 5.0};
        const SweepResult r = run_sweep(sw, root / "bad", false, false);
        CHECK(r.rows.size() == 4);
        CHECK(r.failed == 2);
        for (const auto& row : r.rows)
            if (row.verdict == "error") CHECK(!row.message.empty());
    }
    fs::remove_all(root);
}

TEST_CASE("plots") {
    const fs::path root = scratch("plots");
    SUBCASE("empty time series: error and no file") {
        fs::create_directories(root / "empty");
        {
            std::ofstream out(root / "empty" / kTimeseriesFile);
            const auto& cols = record_columns();
            for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
            out << "\n";
        }
        CHECK_THROWS_AS(plot_timeseries(root / "empty" / kTimeseriesFile, root / "empty", 0.01, kDeltaMax), PlotError);
        CHECK(!fs::exists(root / "empty" / "mode_energy.svg"));
        CHECK(!fs::exists(root / "empty" / "free_energy.svg"));
    }
    SUBCASE("missing column is named") {
        fs::create_directories(root / "missing");
        {
            std::ofstream out(root / "missing" / kTimeseriesFile);
            out << "t,mass\n0,1\n1,1\n";
        }
        CHECK_THROWS_WITH_AS(plot_timeseries(root / "missing" / kTimeseriesFile, root / "missing", 0.01, kDeltaMax),
                             doctest::Contains("mode_N_k1"), PlotError);
    }
    SUBCASE("linear passive run decays below the reference line") {
        RunConfig cfg;
        cfg.name = "passive";
        cfg.grid = {32, 256, 8.0 * kPi};
        cfg.params = PhysParams::from_kappa_nu(0.01, 1.0, 1.0, 0);
        cfg.switches = Switches{true, false, false, false};
        cfg.t_max = 20.0;
        cfg.out_interval = 0.5;
        const RunOutcome o = run_single(cfg, root / "passive", false);
        const auto files = plot_dir(root / "passive");
        CHECK(files.size() == 2);
        for (const auto& f : files) CHECK(fs::file_size(f) > 0);
        const double bound = enhanced_dissipation_bound(0.01, kDeltaMax, 1);
        const double a0 = o.history.front().mode_norm_N[0];
        for (const auto& r : o.history)
            if (r.t >= 5.0) CHECK(r.mode_norm_N[0] < a0 * std::exp(-bound * r.t));
        CHECK(slurp(root / "passive" / "mode_energy.svg").find("stroke-dasharray") != std::string::npos);
    }
    SUBCASE("sweep heatmap legend lists every verdict") {
        fs::create_directories(root / "sw");
        CsvTable t;
        t.header = sweep_summary_columns();
        const char* verdicts[] = {"completed", "blowup", "resolution_exceeded", "mass_leak"};
        int i = 0;
        for (double m : {10.0, 20.0})
            for (double e : {0.1, 0.2}) {
                t.rows.push_back({"cell-" + std::to_string(i), "0.1", "1", format_number(e), format_number(m), "0.5",
                                  "32", "64", "25", "1", verdicts[i], "1", "1", "nan", ""});
                ++i;
            }
        write_csv(root / "sw" / kSweepSummaryFile, t);
        const auto files = plot_dir(root / "sw");
        REQUIRE(files.size() == 1);
        const std::string svg = slurp(files.front());
        for (const char* v : verdicts) CHECK(svg.find(v) != std::string::npos);
    }
    SUBCASE("neither kind of directory") {
        CHECK_THROWS_AS(plot_dir(root), PlotError);
    }
    fs::remove_all(root);
}

TEST_CASE("lemma report file") {
    const fs::path root = scratch("lemma");
    LemmaConfig cfg;
    cfg.samples = 3000;
    cfg.commutator_samples = 2000;
    const LemmaRun r = run_lemma_to(cfg, root);
    CHECK(r.report.gating_violations() == 0);
    REQUIRE(fs::exists(root / "lemma_report.json"));
    std::ifstream in(root / "lemma_report.json");
    const auto j = nlohmann::json::parse(in);
    CHECK(j.contains("entries"));
    CHECK(j.contains("commutator_constant"));
    CHECK(r.commutator.size() == 2 * cfg.iotas.size());
    fs::remove_all(root);
}
