#pragma once

#include <filesystem>
#include <vector>

#include "pks/harness/config.hpp"
#include "pks/run.hpp"

namespace pks::harness {

inline constexpr const char* kResolvedConfigFile = "resolved_config.toml";
inline constexpr const char* kTimeseriesFile = "timeseries.csv";
inline constexpr const char* kSummaryFile = "summary.json";
inline constexpr const char* kCheckpointFile = "checkpoint.bin";

/// Raised when an output directory already holds a run and overwriting was not requested.
class OutputCollision : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOutcome {
    RunReport report;
    std::vector<DiagnosticsRecord> history;  // full series as written to the CSV
    std::filesystem::path dir;
};

/// Runs `config` into `dir`, writing the resolved config, CSV, checkpoints and JSON summary.
RunOutcome run_single(const RunConfig& config, const std::filesystem::path& dir, bool force,
                      const RunCallbacks& extra = {});

/// Continues the run in `dir` from its last checkpoint. A finished run is returned as is.
RunOutcome resume_run(const std::filesystem::path& dir, const RunCallbacks& extra = {});

/// 0 completed, 2 blowup, 1 anything else.
int exit_code(RunStatus status);

}  // namespace pks::harness
