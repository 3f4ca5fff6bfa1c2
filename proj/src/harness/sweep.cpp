#include "pks/harness/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include <nlohmann/json.hpp>

#include "pks/harness/output.hpp"
#include "pks/harness/run_single.hpp"

namespace pks::harness {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<std::string> sweep_summary_columns() {
    return {"cell", "kappa", "nu", "epsilon", "M", "sigma", "nx", "ny", "ly", "couette",
            "verdict", "t_stop", "peak_sup", "rate_k1", "message"};
}

namespace {

template <class T>
std::vector<std::optional<T>> axis(const std::vector<T>& values) {
    if (values.empty()) return {std::nullopt};
    std::vector<std::optional<T>> out;
    for (const T& v : values) out.emplace_back(v);
    return out;
}

void apply_triple(PhysParams& p, std::optional<double> kappa, std::optional<double> nu, std::optional<double> eps) {
    if (nu) p.nu = *nu;
    if (kappa && eps && !nu) {
        p.kappa = *kappa;
        p.epsilon = *eps;
        p.nu = p.kappa / p.epsilon;
    } else if (kappa) {
        p.kappa = *kappa;
        if (eps) p.epsilon = *eps;
        else p.epsilon = p.kappa / p.nu;
    } else if (eps) {
        p.epsilon = *eps;
        p.kappa = p.epsilon * p.nu;
    } else if (nu) {
        p.kappa = p.epsilon * p.nu;
    }
}

std::string cell_key(const RunConfig& c) {
    const double sigma = c.blobs.empty() ? 0.0 : c.blobs.front().sigma;
    return "kappa=" + format_number(c.params.kappa) + ";nu=" + format_number(c.params.nu) +
           ";epsilon=" + format_number(c.params.epsilon) + ";M=" + format_number(c.total_mass()) +
           ";sigma=" + format_number(sigma) + ";nx=" + std::to_string(c.grid.nx) + ";ny=" + std::to_string(c.grid.ny) +
           ";ly=" + format_number(c.grid.ly) + ";couette=" + (c.switches.couette ? "1" : "0");
}

std::vector<std::string> row_cells(const SweepRow& r) {
    const RunConfig& c = r.cell.config;
    const double sigma = c.blobs.empty() ? 0.0 : c.blobs.front().sigma;
    std::string msg = r.message;
    for (char& ch : msg)
        if (ch == ',' || ch == '\n') ch = ';';
    return {"cell-" + r.cell.hash,
            format_number(c.params.kappa),
            format_number(c.params.nu),
            format_number(c.params.epsilon),
            format_number(c.total_mass()),
            format_number(sigma),
            std::to_string(c.grid.nx),
            std::to_string(c.grid.ny),
            format_number(c.grid.ly),
            c.switches.couette ? "1" : "0",
            r.verdict,
            format_number(r.t_stop),
            format_number(r.peak_sup),
            format_number(r.rate_k1),
            msg};
}

std::optional<SweepRow> load_finished(const SweepCell& cell, const fs::path& cell_dir) {
    const fs::path summary = cell_dir / kSummaryFile;
    if (!fs::exists(summary)) return std::nullopt;
    try {
        std::ifstream in(summary);
        const nlohmann::json s = nlohmann::json::parse(in);
        SweepRow row;
        row.cell = cell;
        row.verdict = s.at("verdict").at("status").get<std::string>();
        row.t_stop = s.at("verdict").at("t_stop").get<double>();
        const auto& peak = s.at("verdict").at("peak_sup");
        row.peak_sup = peak.is_null() ? std::nan("") : peak.get<double>();
        const auto& rate = s.at("fitted_rates").at(0).at("rate");
        row.rate_k1 = rate.is_null() ? std::nan("") : rate.get<double>();
        return row;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace

std::vector<SweepCell> expand_sweep(const SweepConfig& sweep) {
    std::vector<SweepCell> cells;
    const SweepAxes& a = sweep.axes;
    for (const auto& grid : axis(a.grid))
        for (const auto& couette : axis(a.couette))
            for (const auto& sigma : axis(a.sigma))
                for (const auto& m : axis(a.mass))
                    for (const auto& nu : axis(a.nu))
                        for (const auto& eps : axis(a.epsilon))
                            for (const auto& kappa : axis(a.kappa)) {
                                SweepCell cell;
                                cell.index = cells.size();
                                RunConfig c = sweep.base;
                                if (grid) c.grid = *grid;
                                if (couette) c.switches.couette = *couette;
                                if (sigma)
                                    for (Blob& b : c.blobs) b.sigma = *sigma;
                                if (m) {
                                    const double total = c.total_mass();
                                    if (c.blobs.empty()) c.blobs.push_back(Blob{});
                                    if (total > 0.0)
                                        for (Blob& b : c.blobs) b.mass *= *m / total;
                                    else
                                        c.blobs.front().mass = *m;
                                }
                                apply_triple(c.params, kappa, nu, eps);
                                c.params.mass = c.total_mass();
                                cell.key = cell_key(c);
                                char hex[17];
                                std::snprintf(hex, sizeof hex, "%016llx",
                                              static_cast<unsigned long long>(fnv1a64(cell.key)));
                                cell.hash = hex;
                                c.name = sweep.base.name + "/cell-" + cell.hash;
                                try {
                                    c.validate();
                                } catch (const std::exception& e) {
                                    cell.invalid_reason = e.what();
                                }
                                cell.config = std::move(c);
                                cells.push_back(std::move(cell));
                            }
    return cells;
}

SweepResult run_sweep(const SweepConfig& sweep, const fs::path& dir, bool force, bool resume,
                      const std::string& resolved_toml) {
    resume = resume || sweep.resume;
    const std::vector<SweepCell> cells = expand_sweep(sweep);
    const fs::path summary_path = dir / kSweepSummaryFile;
    if (fs::exists(summary_path) && !force && !resume)
        throw OutputCollision("output directory " + dir.string() +
                              " already holds a sweep; pass --force to overwrite or resume it");
    fs::create_directories(dir / "cells");
    if (!resolved_toml.empty()) {
        std::ofstream out(dir / kResolvedConfigFile, std::ios::binary | std::ios::trunc);
        out << resolved_toml;
    }

    SweepResult result;
    result.rows.resize(cells.size());
    std::mutex lock;
    {
        std::ofstream out(summary_path, std::ios::binary | std::ios::trunc);
        const auto cols = sweep_summary_columns();
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
        out << '\n';
    }
    auto append = [&](const SweepRow& row) {
        std::lock_guard<std::mutex> guard(lock);
        std::ofstream out(summary_path, std::ios::binary | std::ios::app);
        const auto cells_out = row_cells(row);
        for (std::size_t i = 0; i < cells_out.size(); ++i) out << (i ? "," : "") << cells_out[i];
        out << '\n';
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const SweepCell& cell = cells[i];
            const fs::path cell_dir = dir / "cells" / ("cell-" + cell.hash);
            SweepRow row;
            row.cell = cell;
            if (!cell.invalid_reason.empty()) {
                row.verdict = "error";
                row.t_stop = row.peak_sup = row.rate_k1 = std::nan("");
                row.message = cell.invalid_reason;
            } else if (auto done = resume ? load_finished(cell, cell_dir) : std::nullopt) {
                row = *done;
            } else {
                try {
                    const RunOutcome out = run_single(cell.config, cell_dir, true);
                    row.verdict = to_string(out.report.verdict.status);
                    row.t_stop = out.report.verdict.t_stop;
                    row.peak_sup = out.report.verdict.peak_sup;
                    row.rate_k1 = out.report.rate_k1 ? out.report.rate_k1->rate : std::nan("");
                    row.message = out.report.verdict.trigger;
                    row.executed = true;
                } catch (const std::exception& e) {
                    row.verdict = "error";
                    row.t_stop = row.peak_sup = row.rate_k1 = std::nan("");
                    row.message = e.what();
                    row.executed = true;
                }
            }
            append(row);
            std::lock_guard<std::mutex> guard(lock);
            result.rows[i] = std::move(row);
        }
    };
    const int workers = std::max(1, std::min<int>(sweep.workers, static_cast<int>(cells.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    // final rewrite in cell order so the summary does not depend on scheduling
    CsvTable table;
    table.header = sweep_summary_columns();
    for (const SweepRow& r : result.rows) {
        table.rows.push_back(row_cells(r));
        if (r.executed) ++result.executed;
        if (r.verdict == "error") ++result.failed;
    }
    write_csv(summary_path, table);
    return result;
}

}  // namespace pks::harness
