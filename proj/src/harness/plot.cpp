#include "pks/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pks/harness/output.hpp"
#include "pks/harness/run_single.hpp"
#include "pks/harness/sweep.hpp"

namespace pks::harness {

namespace fs = std::filesystem;

namespace {

constexpr double kW = 720, kH = 440, kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

struct Series {
    std::string label;
    std::string color;
    std::vector<double> x, y;
    bool dashed = false;
};

/// Line chart; log_y drops non-positive samples.
std::string line_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series, bool log_y) {
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
    for (const Series& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (log_y && s.y[i] <= 0.0)) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    if (!(x1 >= x0) || !(y1 >= y0)) throw PlotError("no plottable samples for '" + title + "'");
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - (ty(y) - y0) / (y1 - y0)) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << esc(title) << "</text>\n";
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = x0 + (x1 - x0) * i / 5.0;
        const double X = px(xv);
        o << "<line x1=\"" << X << "\" y1=\"" << kTop + ph << "\" x2=\"" << X << "\" y2=\"" << kTop + ph + 5
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << X << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
        const double yv = y0 + (y1 - y0) * i / 5.0;
        const double Y = kTop + (1.0 - i / 5.0) * ph;
        o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << Y << "\" x2=\"" << kLeft << "\" y2=\"" << Y
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << kLeft - 8 << "\" y=\"" << Y + 4 << "\" text-anchor=\"end\">"
          << (log_y ? "1e" + num(yv) : num(yv)) << "</text>\n";
    }
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 15 << "\" text-anchor=\"middle\">" << esc(xlabel)
      << "</text>\n";
    o << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << esc(ylabel) << "</text>\n";
    int li = 0;
    for (const Series& s : series) {
        o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
          << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i]) || (log_y && s.y[i] <= 0.0) || ty(s.y[i]) < y0) continue;
            o << px(s.x[i]) << "," << py(s.y[i]) << " ";
        }
        o << "\"/>\n";
        const double ly = kTop + 10 + 18 * li++;
        o << "<line x1=\"" << kW - kRight + 10 << "\" y1=\"" << ly << "\" x2=\"" << kW - kRight + 34 << "\" y2=\"" << ly
          << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "")
          << "/>\n";
        o << "<text x=\"" << kW - kRight + 40 << "\" y=\"" << ly + 4 << "\">" << esc(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c"};

}  // namespace

std::vector<fs::path> plot_timeseries(const fs::path& csv, const fs::path& out_dir, double kappa, double delta) {
    const CsvTable table = read_csv(csv);
    if (table.header.empty()) throw PlotError(csv.string() + ": empty file");
    std::vector<double> t, mode[3], F, E;
    try {
        t = table.numbers("t");
        for (int k = 1; k <= 3; ++k) mode[k - 1] = table.numbers("mode_N_k" + std::to_string(k));
        F = table.numbers("free_energy_F");
        E = table.numbers("energy_E");
    } catch (const std::runtime_error& e) {
        throw PlotError(csv.string() + ": " + e.what());
    }
    if (t.empty()) throw PlotError(csv.string() + ": empty time series");

    std::vector<Series> ms;
    double floor_all = INFINITY;
    for (int k = 0; k < 3; ++k)
        for (double v : mode[k])
            if (v > 0.0) floor_all = std::min(floor_all, v);
    for (int k = 1; k <= 3; ++k) {
        ms.push_back({"||N(k=" + std::to_string(k) + ")||", kColors[k - 1], t, mode[k - 1], false});
        const double a0 = mode[k - 1].front();
        if (a0 > 0.0) {
            Series ref{"reference k=" + std::to_string(k), kColors[k - 1], t, {}, true};
            const double rate = delta * std::cbrt(kappa) * std::pow(k, 2.0 / 3.0);
            for (double tv : t) ref.y.push_back(std::max(a0 * std::exp(-rate * (tv - t.front())), floor_all));
            ms.push_back(std::move(ref));
        }
    }
    fs::create_directories(out_dir);
    std::vector<fs::path> written;
    const std::string mode_svg = line_chart("mode amplitudes, reference decay exp(-delta kappa^(1/3) k^(2/3) t)", "t",
                                            "||N(k, .)||_2", ms, true);
    const std::string fe_svg = line_chart("free energy", "t", "value",
                                          {{"F", kColors[0], t, F, false}, {"E", kColors[1], t, E, true}}, false);
    write_file(out_dir / "mode_energy.svg", mode_svg);
    written.push_back(out_dir / "mode_energy.svg");
    write_file(out_dir / "free_energy.svg", fe_svg);
    written.push_back(out_dir / "free_energy.svg");
    return written;
}

std::vector<fs::path> plot_sweep(const fs::path& summary_csv, const fs::path& out_dir) {
    const CsvTable table = read_csv(summary_csv);
    std::vector<double> M, eps, couette;
    std::size_t vcol = 0;
    try {
        M = table.numbers("M");
        eps = table.numbers("epsilon");
        couette = table.numbers("couette");
        vcol = table.column("verdict");
    } catch (const std::runtime_error& e) {
        throw PlotError(summary_csv.string() + ": " + e.what());
    }
    if (M.empty()) throw PlotError(summary_csv.string() + ": empty sweep summary");

    const std::map<std::string, std::string> colors = {{"completed", "#2ca02c"},
                                                       {"blowup", "#d62728"},
                                                       {"resolution_exceeded", "#ff7f0e"},
                                                       {"mass_leak", "#9467bd"},
                                                       {"error", "#7f7f7f"}};
    std::set<double> Ms(M.begin(), M.end()), Es(eps.begin(), eps.end()), Cs(couette.begin(), couette.end());
    const std::vector<double> mv(Ms.begin(), Ms.end()), ev(Es.begin(), Es.end()), cv(Cs.begin(), Cs.end());
    const double cell = 36, panel_gap = 90, left = 90, top = 50;
    const double panel_w = cell * ev.size(), panel_h = cell * mv.size();
    const double width = left + cv.size() * (panel_w + panel_gap) + 200;
    const double height = top + panel_h + 90;

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << left << "\" y=\"22\" font-size=\"15\">verdict over (epsilon, M)</text>\n";
    for (std::size_t p = 0; p < cv.size(); ++p) {
        const double ox = left + p * (panel_w + panel_gap);
        o << "<text x=\"" << ox + panel_w / 2 << "\" y=\"" << top - 8 << "\" text-anchor=\"middle\">couette "
          << (cv[p] != 0.0 ? "on" : "off") << "</text>\n";
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            if (couette[r] != cv[p]) continue;
            const std::size_t xi = std::lower_bound(ev.begin(), ev.end(), eps[r]) - ev.begin();
            const std::size_t yi = std::lower_bound(mv.begin(), mv.end(), M[r]) - mv.begin();
            const std::string verdict = vcol < table.rows[r].size() ? table.rows[r][vcol] : "error";
            const auto it = colors.find(verdict);
            o << "<rect x=\"" << ox + xi * cell << "\" y=\"" << top + (mv.size() - 1 - yi) * cell << "\" width=\""
              << cell - 2 << "\" height=\"" << cell - 2 << "\" fill=\""
              << (it == colors.end() ? "#7f7f7f" : it->second) << "\"><title>" << esc(verdict) << "</title></rect>\n";
        }
        for (std::size_t xi = 0; xi < ev.size(); ++xi)
            o << "<text x=\"" << ox + xi * cell + cell / 2 << "\" y=\"" << top + panel_h + 14
              << "\" text-anchor=\"middle\">" << num(ev[xi]) << "</text>\n";
        o << "<text x=\"" << ox + panel_w / 2 << "\" y=\"" << top + panel_h + 34
          << "\" text-anchor=\"middle\">epsilon</text>\n";
        for (std::size_t yi = 0; yi < mv.size(); ++yi)
            o << "<text x=\"" << ox - 6 << "\" y=\"" << top + (mv.size() - 1 - yi) * cell + cell / 2 + 4
              << "\" text-anchor=\"end\">" << num(mv[yi]) << "</text>\n";
    }
    o << "<text transform=\"translate(16," << top + panel_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">M</text>\n";
    const double lx = left + cv.size() * (panel_w + panel_gap);
    int li = 0;
    for (const char* v : {"completed", "blowup", "resolution_exceeded", "mass_leak", "error"}) {
        const double ly = top + 20 * li++;
        o << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"14\" height=\"14\" fill=\"" << colors.at(v)
          << "\"/>\n<text x=\"" << lx + 20 << "\" y=\"" << ly + 11 << "\">" << v << "</text>\n";
    }
    o << "</svg>\n";
    fs::create_directories(out_dir);
    write_file(out_dir / "verdict_heatmap.svg", o.str());
    return {out_dir / "verdict_heatmap.svg"};
}

std::vector<fs::path> plot_dir(const fs::path& dir) {
    if (fs::exists(dir / kSweepSummaryFile)) return plot_sweep(dir / kSweepSummaryFile, dir);
    if (fs::exists(dir / kTimeseriesFile)) {
        double kappa = 1.0, delta = 1.0 / (16.0 * M_PI * M_PI);
        if (fs::exists(dir / kSummaryFile)) {
            std::ifstream in(dir / kSummaryFile);
            const nlohmann::json s = nlohmann::json::parse(in);
            kappa = s.at("paper").at("kappa").get<double>();
            delta = s.at("paper").at("delta").get<double>();
        } else if (fs::exists(dir / kResolvedConfigFile)) {
            const ParsedConfig cfg = parse_config(dir / kResolvedConfigFile);
            kappa = cfg.run.params.kappa;
            delta = cfg.run.params.delta;
        }
        return plot_timeseries(dir / kTimeseriesFile, dir, kappa, delta);
    }
    throw PlotError(dir.string() + " holds neither " + kTimeseriesFile + " nor " + kSweepSummaryFile);
}

}  // namespace pks::harness
