#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pks/diagnostics.hpp"
#include "pks/harness/config.hpp"
#include "pks/harness/lemma_report.hpp"
#include "pks/harness/run_single.hpp"
#include "pks/lemma_suite.hpp"
#include "pks/multipliers.hpp"

namespace py = pybind11;
using namespace pks;

namespace {

py::object json_to_py(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

py::dict record_dict(const DiagnosticsRecord& r) {
    py::dict d;
    const auto& cols = record_columns();
    const auto vals = record_values(r);
    for (std::size_t i = 0; i < cols.size(); ++i) d[py::str(cols[i])] = vals[i];
    return d;
}

py::dict run_dict(const harness::RunOutcome& o) {
    py::dict d;
    d["status"] = to_string(o.report.verdict.status);
    d["t_stop"] = o.report.verdict.t_stop;
    d["peak_sup"] = o.report.verdict.peak_sup;
    d["trigger"] = o.report.verdict.trigger;
    d["exit_code"] = harness::exit_code(o.report.verdict.status);
    d["dir"] = o.dir;
    d["rate_k1"] = o.report.rate_k1 ? py::object(py::float_(o.report.rate_k1->rate)) : py::object(py::none());
    py::list rows;
    for (const auto& r : o.history) rows.append(record_dict(r));
    d["history"] = rows;
    return d;
}

MultiplierSpec spec_of(double iota, double kappa, int s) { return MultiplierSpec{iota, kappa, kDeltaMax, s}; }

}  // namespace

PYBIND11_MODULE(_pkscouette, m) {
    m.doc() = "Bindings for the sheared-frame Keller-Segel/Navier-Stokes solver";
    m.attr("DELTA_MAX") = kDeltaMax;

    m.def("W_iota", &W_iota, py::arg("t"), py::arg("k"), py::arg("eta"), py::arg("iota"));
    m.def("W_cal", &W_cal, py::arg("t"), py::arg("k"), py::arg("eta"));
    m.def(
        "M_iota", [](double t, double k, double eta, double iota) { return M_iota(t, k, eta, spec_of(iota, iota, 0)); },
        py::arg("t"), py::arg("k"), py::arg("eta"), py::arg("iota"));
    m.def(
        "dt_M_iota",
        [](double t, double k, double eta, double iota) { return dt_M_iota(t, k, eta, spec_of(iota, iota, 0)); },
        py::arg("t"), py::arg("k"), py::arg("eta"), py::arg("iota"));
    m.def(
        "deta_M_iota",
        [](double t, double k, double eta, double iota) { return deta_M_iota(t, k, eta, spec_of(iota, iota, 0)); },
        py::arg("t"), py::arg("k"), py::arg("eta"), py::arg("iota"));
    m.def(
        "A_iota",
        [](double t, double k, double eta, double iota, double kappa, int s) {
            return A_iota(t, k, eta, spec_of(iota, kappa, s));
        },
        py::arg("t"), py::arg("k"), py::arg("eta"), py::arg("iota"), py::arg("kappa"), py::arg("s") = 5);
    m.def("enhanced_dissipation_bound", &enhanced_dissipation_bound, py::arg("kappa"), py::arg("delta") = kDeltaMax,
          py::arg("k") = 1);

    m.def(
        "verify_multipliers",
        [](long samples, std::uint64_t seed) {
            harness::LemmaConfig cfg;
            cfg.samples = static_cast<int>(samples);
            cfg.seed = seed;
            harness::LemmaRun r;
            {
                py::gil_scoped_release release;
                r = harness::run_lemma(cfg);
            }
            return json_to_py(r.to_json(cfg).dump());
        },
        py::arg("samples") = 100000, py::arg("seed") = 1);

    m.def("preset_path", [](const std::string& name) { return harness::preset_path(name); }, py::arg("name"));
    m.def("preset_names", &harness::preset_names);

    m.def(
        "run_config",
        [](const std::filesystem::path& config, const std::filesystem::path& out_dir, bool force) {
            const harness::ParsedConfig parsed = harness::parse_config(config);
            if (parsed.kind != harness::ConfigKind::run) throw py::value_error("config is not a single run");
            const auto dir = out_dir.empty() ? harness::resolve_output_dir(parsed) : out_dir;
            harness::RunOutcome o;
            {
                py::gil_scoped_release release;
                o = harness::run_single(parsed.run, dir, force || parsed.force);
            }
            return run_dict(o);
        },
        py::arg("config"), py::arg("out_dir") = std::filesystem::path(), py::arg("force") = false);

    m.def(
        "resume",
        [](const std::filesystem::path& dir) {
            harness::RunOutcome o;
            {
                py::gil_scoped_release release;
                o = harness::resume_run(dir);
            }
            return run_dict(o);
        },
        py::arg("dir"));

    py::register_exception<harness::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<harness::OutputCollision>(m, "OutputCollision", PyExc_FileExistsError);
}
