#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace pks::harness {

/// Raised for unusable plot input (missing columns, empty series); no file is written.
class PlotError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// mode_energy.svg (log-scale ||N(k)|| for k = 1..3 with reference lines decaying at
/// delta kappa^{1/3} k^{2/3}) and free_energy.svg (F and E), from timeseries.csv.
std::vector<std::filesystem::path> plot_timeseries(const std::filesystem::path& csv, const std::filesystem::path& out_dir,
                                                   double kappa, double delta);

/// verdict_heatmap.svg over (M, epsilon), one panel per couette setting, legend with every verdict.
std::vector<std::filesystem::path> plot_sweep(const std::filesystem::path& summary_csv,
                                              const std::filesystem::path& out_dir);

/// Whatever applies to `dir`: a run directory (timeseries.csv + summary.json) or a sweep
/// directory (sweep_summary.csv).
std::vector<std::filesystem::path> plot_dir(const std::filesystem::path& dir);

}  // namespace pks::harness
