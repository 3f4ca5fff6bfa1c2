#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "pks/run.hpp"

namespace pks::harness {

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr int kSummarySchemaVersion = 1;

/// "%.17g", so values round-trip exactly and identical runs give identical bytes.
std::string format_number(double v);

/// Appends diagnostics rows to a CSV file with the fixed column order of record_columns().
class CsvWriter {
public:
    /// `append` keeps existing rows (resume); otherwise the file is truncated and the header written.
    CsvWriter(const std::filesystem::path& path, bool append);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void write(const DiagnosticsRecord& r);
    void flush();

private:
    std::FILE* file_ = nullptr;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a column; throws std::runtime_error naming the column if absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> numbers(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

std::vector<DiagnosticsRecord> read_timeseries(const std::filesystem::path& path);

/// Keeps only rows with t <= t_cut (resume after a checkpoint at t_cut).
void truncate_timeseries(const std::filesystem::path& path, double t_cut);

/// Run summary: schema version, config echo, verdict, initial/final diagnostics, fitted rates
/// for k = 1..3 with the enhanced-dissipation bound.
void write_summary_json(const std::filesystem::path& path, const RunConfig& config, const RunReport& report,
                        const std::vector<DiagnosticsRecord>& full_history);

}  // namespace pks::harness
