#include "pks/harness/output.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pks/diagnostics.hpp"

namespace pks::harness {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, bool append) {
    const bool fresh = !append || !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    file_ = std::fopen(path.c_str(), fresh ? "wb" : "ab");
    if (!file_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    if (fresh) {
        const auto& cols = record_columns();
        for (std::size_t i = 0; i < cols.size(); ++i) std::fprintf(file_, "%s%s", i ? "," : "", cols[i].c_str());
        std::fputc('\n', file_);
    }
}

CsvWriter::~CsvWriter() {
    if (file_) std::fclose(file_);
}

void CsvWriter::write(const DiagnosticsRecord& r) {
    const std::vector<double> v = record_values(r);
    for (std::size_t i = 0; i < v.size(); ++i) std::fprintf(file_, "%s%.17g", i ? "," : "", v[i]);
    std::fputc('\n', file_);
}

void CsvWriter::flush() { std::fflush(file_); }

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::runtime_error("missing column '" + name + "'");
}

std::vector<double> CsvTable::numbers(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(c < row.size() ? std::strtod(row[c].c_str(), nullptr) : std::nan(""));
    return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) return t;
    t.header = split(line);
    while (std::getline(in, line))
        if (!line.empty()) t.rows.push_back(split(line));
    return t;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
}

std::vector<DiagnosticsRecord> read_timeseries(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    if (t.header != record_columns()) throw std::runtime_error(path.string() + ": unexpected column layout");
    std::vector<DiagnosticsRecord> out;
    for (const auto& row : t.rows) {
        std::vector<double> v;
        for (const auto& c : row) v.push_back(std::strtod(c.c_str(), nullptr));
        out.push_back(record_from_values(v));
    }
    return out;
}

void truncate_timeseries(const std::filesystem::path& path, double t_cut) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string header, line, kept;
    std::getline(in, header);
    kept = header + "\n";
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const double t = std::strtod(line.c_str(), nullptr);
        if (t <= t_cut) kept += line + "\n";
    }
    in.close();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << kept;
}

namespace {

nlohmann::ordered_json number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

nlohmann::ordered_json record_json(const DiagnosticsRecord& r) {
    nlohmann::ordered_json j;
    const auto& cols = record_columns();
    const std::vector<double> v = record_values(r);
    for (std::size_t i = 0; i < cols.size(); ++i) j[cols[i]] = number_or_null(v[i]);
    return j;
}

}  // namespace

void write_summary_json(const std::filesystem::path& path, const RunConfig& config, const RunReport& report,
                        const std::vector<DiagnosticsRecord>& history) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSummarySchemaVersion;
    j["name"] = config.name;
    const PhysParams& p = config.params;
    j["paper"] = {{"kappa", p.kappa}, {"nu", p.nu}, {"epsilon", p.epsilon},
                  {"delta", p.delta}, {"s", p.s},   {"M", config.total_mass()}};
    j["grid"] = {{"nx", config.grid.nx}, {"ny", config.grid.ny}, {"ly", config.grid.ly}};
    j["switches"] = {{"couette", config.switches.couette},
                     {"chemotaxis", config.switches.chemotaxis},
                     {"fluid_forcing", config.switches.fluid_forcing},
                     {"nonlinear", config.switches.nonlinear}};
    j["verdict"] = {{"status", to_string(report.verdict.status)},
                    {"t_stop", report.verdict.t_stop},
                    {"peak_sup", number_or_null(report.verdict.peak_sup)},
                    {"tail_fraction", number_or_null(report.verdict.tail_fraction)},
                    {"trigger", report.verdict.trigger}};
    j["steps"] = report.steps;
    j["flags"] = report.flags;
    j["resolution_bound_initial"] = number_or_null(report.resolution_bound_initial);
    nlohmann::ordered_json rates = nlohmann::ordered_json::array();
    for (int k = 1; k <= 3; ++k) {
        std::string note;
        const auto fit = fit_mode_rate(history, k, &note);
        nlohmann::ordered_json e;
        e["k"] = k;
        e["bound"] = enhanced_dissipation_bound(p.kappa, p.delta, k);
        if (fit) {
            e["rate"] = fit->rate;
            e["decaying"] = fit->decaying;
            e["t_begin"] = fit->t_begin;
            e["t_end"] = fit->t_end;
            e["decades"] = fit->decades;
            e["points"] = fit->points;
            e["meets_bound"] = fit->rate >= e["bound"].get<double>();
        } else {
            e["rate"] = nullptr;
            e["note"] = note;
        }
        rates.push_back(e);
    }
    j["fitted_rates"] = rates;
    if (!history.empty()) {
        j["initial"] = record_json(history.front());
        j["final"] = record_json(history.back());
        double max_drift = 0.0;
        const double m0 = history.front().mass;
        for (const auto& r : history)
            if (m0 != 0.0) max_drift = std::max(max_drift, std::abs(r.mass - m0) / std::abs(m0));
        j["max_relative_mass_drift"] = max_drift;
    }
    j["rows"] = history.size();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace pks::harness
