#include "pks/harness/run_single.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "pks/harness/checkpoint.hpp"
#include "pks/harness/output.hpp"

namespace pks::harness {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

RunOutcome execute(const RunConfig& config, const fs::path& dir, const RunCallbacks& extra,
                   const RunCheckpoint* resume) {
    CsvWriter csv(dir / kTimeseriesFile, resume != nullptr);
    RunCallbacks cb;
    cb.abort_after_steps = extra.abort_after_steps;
    cb.on_record = [&](const DiagnosticsRecord& r) {
        csv.write(r);
        if (extra.on_record) extra.on_record(r);
    };
    cb.on_checkpoint = [&](const RunCheckpoint& ck) {
        csv.flush();
        write_checkpoint(dir / kCheckpointFile, ck);
        if (extra.on_checkpoint) extra.on_checkpoint(ck);
    };
    RunOutcome out;
    out.dir = dir;
    out.report = run(config, cb, resume);
    csv.flush();
    out.history = read_timeseries(dir / kTimeseriesFile);
    out.report.rate_k1 = fit_mode_rate(out.history, 1, &out.report.rate_k1_note);
    out.report.flags = monitor_flags(out.history);
    write_summary_json(dir / kSummaryFile, config, out.report, out.history);
    return out;
}

}  // namespace

int exit_code(RunStatus status) {
    switch (status) {
    case RunStatus::completed: return 0;
    case RunStatus::blowup: return 2;
    default: return 1;
    }
}

RunOutcome run_single(const RunConfig& config, const fs::path& dir, bool force, const RunCallbacks& extra) {
    config.validate();
    const fs::path files[] = {dir / kResolvedConfigFile, dir / kTimeseriesFile, dir / kSummaryFile,
                              dir / kCheckpointFile};
    bool occupied = false;
    for (const auto& f : files) occupied = occupied || fs::exists(f);
    if (occupied && !force)
        throw OutputCollision("output directory " + dir.string() +
                              " already holds a run; pass --force to overwrite or use resume");
    fs::create_directories(dir);
    for (const auto& f : files) fs::remove(f);
    write_text(dir / kResolvedConfigFile, resolved_run_toml(config, dir.string()));
    return execute(config, dir, extra, nullptr);
}

RunOutcome resume_run(const fs::path& dir, const RunCallbacks& extra) {
    const fs::path cfg_path = dir / kResolvedConfigFile;
    if (!fs::exists(cfg_path)) throw std::runtime_error(dir.string() + " has no " + kResolvedConfigFile);
    const ParsedConfig parsed = parse_config(cfg_path);
    if (parsed.kind != ConfigKind::run) throw std::runtime_error(dir.string() + " does not hold a single run");
    const RunConfig& config = parsed.run;

    if (fs::exists(dir / kSummaryFile)) {
        std::ifstream in(dir / kSummaryFile);
        const nlohmann::json s = nlohmann::json::parse(in);
        RunOutcome out;
        out.dir = dir;
        out.history = read_timeseries(dir / kTimeseriesFile);
        out.report.history = out.history;
        out.report.verdict.status = run_status_from_string(s.at("verdict").at("status").get<std::string>());
        out.report.verdict.t_stop = s.at("verdict").at("t_stop").get<double>();
        out.report.verdict.trigger = s.at("verdict").value("trigger", "");
        out.report.steps = s.value("steps", std::int64_t{0});
        out.report.rate_k1 = fit_mode_rate(out.history, 1, &out.report.rate_k1_note);
        return out;
    }

    if (!fs::exists(dir / kCheckpointFile)) {
        // interrupted before the first checkpoint: start over
        for (const char* f : {kTimeseriesFile, kCheckpointFile}) fs::remove(dir / f);
        return execute(config, dir, extra, nullptr);
    }
    const RunCheckpoint ck = read_checkpoint(dir / kCheckpointFile);
    truncate_timeseries(dir / kTimeseriesFile, ck.state.t);
    return execute(config, dir, extra, &ck);
}

}  // namespace pks::harness
