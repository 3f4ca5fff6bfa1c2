#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pks/harness/config.hpp"

namespace pks::harness {

inline constexpr const char* kSweepSummaryFile = "sweep_summary.csv";

struct SweepCell {
    std::size_t index = 0;
    RunConfig config;
    std::string key;   // canonical parameter string
    std::string hash;  // 16 hex digits of FNV-1a over `key`
    std::string invalid_reason;  // non-empty if the parameter combination is rejected
};

struct SweepRow {
    SweepCell cell;
    std::string verdict;  // run status, or "error"
    double t_stop = 0.0;
    double peak_sup = 0.0;
    double rate_k1 = 0.0;  // NaN when the fit window is too short
    std::string message;
    bool executed = false;  // false when reused from a previous sweep
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::size_t executed = 0;
    std::size_t failed = 0;
};

std::uint64_t fnv1a64(const std::string& text);

/// Cartesian product of the axes applied to the base config. kappa, nu and epsilon stay tied by
/// kappa = epsilon nu: axis values win, the missing member is derived.
std::vector<SweepCell> expand_sweep(const SweepConfig& sweep);

/// Runs every cell into dir/cells/cell-<hash>, at most `sweep.workers` at once. With `resume`
/// (or sweep.resume) cells that already have a summary are reused instead of rerun.
SweepResult run_sweep(const SweepConfig& sweep, const std::filesystem::path& dir, bool force, bool resume,
                      const std::string& resolved_toml = "");

std::vector<std::string> sweep_summary_columns();

}  // namespace pks::harness
