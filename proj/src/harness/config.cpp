#include "pks/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "toml.hpp"

#ifndef PKS_PRESET_DIR
#define PKS_PRESET_DIR ""
#endif

namespace pks::harness {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

/// One TOML table with typed lookups and unknown-key detection.
class Section {
public:
    Section(const toml::table* table, std::string name) : table_(table), name_(std::move(name)) {}

    bool present() const { return table_ != nullptr; }

    bool has(const std::string& key) const { return table_ && table_->contains(key); }

    std::string where(const std::string& key) const {
        return name_.empty() ? key : "[" + name_ + "] " + key;
    }

    std::optional<double> number(const std::string& key) {
        const toml::node* n = node(key);
        if (!n) return std::nullopt;
        if (auto v = n->value<double>()) return *v;
        throw ConfigError(where(key) + ": expected a number");
    }
    double number(const std::string& key, double fallback) { return number(key).value_or(fallback); }

    std::optional<std::int64_t> integer(const std::string& key) {
        const toml::node* n = node(key);
        if (!n) return std::nullopt;
        if (n->is_integer()) return n->value<std::int64_t>();
        if (auto d = n->value<double>(); d && std::floor(*d) == *d) return static_cast<std::int64_t>(*d);
        throw ConfigError(where(key) + ": expected an integer");
    }
    std::int64_t integer(const std::string& key, std::int64_t fallback) { return integer(key).value_or(fallback); }

    std::optional<bool> boolean(const std::string& key) {
        const toml::node* n = node(key);
        if (!n) return std::nullopt;
        if (auto v = n->value<bool>()) return *v;
        throw ConfigError(where(key) + ": expected true or false");
    }
    bool boolean(const std::string& key, bool fallback) { return boolean(key).value_or(fallback); }

    std::optional<std::string> string(const std::string& key) {
        const toml::node* n = node(key);
        if (!n) return std::nullopt;
        if (auto v = n->value<std::string>()) return *v;
        throw ConfigError(where(key) + ": expected a string");
    }

    const toml::array* array(const std::string& key) {
        const toml::node* n = node(key);
        if (!n) return nullptr;
        if (auto a = n->as_array()) return a;
        throw ConfigError(where(key) + ": expected an array");
    }

    std::vector<double> numbers(const std::string& key) {
        std::vector<double> out;
        if (const toml::array* a = array(key))
            for (const toml::node& e : *a) {
                auto v = e.value<double>();
                if (!v) throw ConfigError(where(key) + ": expected an array of numbers");
                out.push_back(*v);
            }
        return out;
    }

    Section sub(const std::string& key) {
        const toml::node* n = node(key);
        if (!n) return Section(nullptr, qualified(key));
        if (auto t = n->as_table()) return Section(t, qualified(key));
        throw ConfigError(where(key) + ": expected a table");
    }

    void mark(const std::string& key) { used_.insert(key); }

    /// Rejects keys that were never looked up.
    void finish() const {
        if (!table_) return;
        for (const auto& [k, v] : *table_) {
            const std::string key(k.str());
            if (!used_.count(key)) throw ConfigError("unknown key " + where(key));
        }
    }

private:
    std::string qualified(const std::string& key) const { return name_.empty() ? key : name_ + "." + key; }

    const toml::node* node(const std::string& key) {
        used_.insert(key);
        if (!table_) return nullptr;
        return table_->get(key);
    }

    const toml::table* table_;
    std::string name_;
    std::set<std::string> used_;
};

OmegaKind omega_kind_from(const std::string& name, const std::string& where) {
    if (name == "zero") return OmegaKind::zero;
    if (name == "mode") return OmegaKind::mode;
    if (name == "threshold") return OmegaKind::threshold;
    if (name == "random") return OmegaKind::random;
    throw ConfigError(where + ": unknown vorticity kind '" + name + "' (zero, mode, threshold, random)");
}

std::string omega_kind_name(OmegaKind k) {
    switch (k) {
    case OmegaKind::zero: return "zero";
    case OmegaKind::mode: return "mode";
    case OmegaKind::threshold: return "threshold";
    case OmegaKind::random: return "random";
    }
    return "zero";
}

/// Fills kappa, nu, epsilon from whichever of them are given; defaults nu = 1.
void resolve_triple(PhysParams& p, std::optional<double> kappa, std::optional<double> nu,
                    std::optional<double> epsilon, const std::string& where) {
    if (kappa && nu && epsilon) {
        p.kappa = *kappa;
        p.nu = *nu;
        p.epsilon = *epsilon;
        if (std::abs(p.kappa - p.epsilon * p.nu) > 1e-12 * std::abs(p.kappa))
            throw ConfigError(where + " kappa = " + fmt_double(p.kappa) + " != epsilon * nu = " +
                              fmt_double(p.epsilon * p.nu) + " (kappa = epsilon nu required)");
        return;
    }
    if (kappa && nu) {
        p.kappa = *kappa;
        p.nu = *nu;
        p.epsilon = p.kappa / p.nu;
    } else if (kappa && epsilon) {
        p.kappa = *kappa;
        p.epsilon = *epsilon;
        p.nu = p.kappa / p.epsilon;
    } else if (nu && epsilon) {
        p.nu = *nu;
        p.epsilon = *epsilon;
        p.kappa = p.epsilon * p.nu;
    } else if (kappa) {
        p.kappa = *kappa;
        p.nu = 1.0;
        p.epsilon = p.kappa;
    } else if (nu) {
        p.nu = *nu;
        p.epsilon = 1.0;
        p.kappa = p.nu;
    } else if (epsilon) {
        p.epsilon = *epsilon;
        p.nu = 1.0;
        p.kappa = p.epsilon;
    }
}

void validate_params(const PhysParams& p, const std::string& where) {
    if (!(p.kappa > 0.0)) throw ConfigError(where + " kappa = " + fmt_double(p.kappa) + " must be > 0");
    if (!(p.kappa <= p.nu))
        throw ConfigError(where + " kappa = " + fmt_double(p.kappa) + " > nu = " + fmt_double(p.nu) +
                          " (epsilon = " + fmt_double(p.epsilon) + ") violates 0 < kappa <= nu <= 1, epsilon <= 1");
    if (!(p.nu <= 1.0))
        throw ConfigError(where + " nu = " + fmt_double(p.nu) + " violates 0 < kappa <= nu <= 1");
    if (!(p.epsilon > 0.0 && p.epsilon <= 1.0))
        throw ConfigError(where + " epsilon = " + fmt_double(p.epsilon) + " must lie in (0, 1]");
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + " " + e.what());
    }
}

GridSpec parse_grid(Section sec, const GridSpec& base) {
    GridSpec g = base;
    g.nx = static_cast<int>(sec.integer("nx", g.nx));
    g.ny = static_cast<int>(sec.integer("ny", g.ny));
    if (sec.has("ly") && sec.has("ly_over_pi")) throw ConfigError("[grid] give either ly or ly_over_pi, not both");
    if (auto v = sec.number("ly_over_pi")) g.ly = *v * kPi;
    g.ly = sec.number("ly", g.ly);
    sec.finish();
    try {
        (void)make_grid(g.nx, g.ny, g.ly);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[grid] ") + e.what());
    }
    return g;
}

RunConfig parse_run(const toml::table& root, ParsedConfig& out, Section& top) {
    RunConfig cfg;
    cfg.name = top.string("name").value_or("run");

    cfg.grid = parse_grid(top.sub("grid"), cfg.grid);

    Section paper = top.sub("paper");
    resolve_triple(cfg.params, paper.number("kappa"), paper.number("nu"), paper.number("epsilon"), "[paper]");
    cfg.params.delta = paper.number("delta", kDeltaMax);
    cfg.params.s = static_cast<int>(paper.integer("s", 5));
    std::optional<double> total_mass = paper.number("M");
    if (!total_mass) total_mass = paper.number("mass");
    paper.finish();
    validate_params(cfg.params, "[paper]");

    Section init = top.sub("initial");
    const double sigma = init.number("sigma", 0.5);
    const double z0 = init.number("z", kPi);
    const double y0 = init.number("y", 0.0);
    cfg.blobs.clear();
    if (const toml::array* blobs = init.array("blob")) {
        int idx = 0;
        for (const toml::node& node : *blobs) {
            const toml::table* t = node.as_table();
            if (!t) throw ConfigError("[[initial.blob]] entries must be tables");
            Section b(t, "initial.blob." + std::to_string(idx++));
            Blob blob;
            blob.mass = b.number("mass", 1.0);
            blob.z = b.number("z", z0);
            blob.y = b.number("y", y0);
            blob.sigma = b.number("sigma", sigma);
            b.finish();
            cfg.blobs.push_back(blob);
        }
        if (total_mass) {
            double m = 0.0;
            for (const Blob& b : cfg.blobs) m += b.mass;
            if (std::abs(m - *total_mass) > 1e-12 * std::max(1.0, *total_mass))
                throw ConfigError("[paper] M = " + fmt_double(*total_mass) + " differs from the blob masses' sum " +
                                  fmt_double(m));
        }
    } else {
        const double m = total_mass.value_or(1.0);
        if (m > 0.0) cfg.blobs.push_back(Blob{m, z0, y0, sigma});
    }
    for (const Blob& b : cfg.blobs) {
        if (!(b.sigma > 0.0)) throw ConfigError("[initial] sigma must be > 0");
        if (!(b.mass >= 0.0)) throw ConfigError("[paper] M must be >= 0");
    }
    cfg.params.mass = cfg.total_mass();

    Section omega = init.sub("omega");
    cfg.omega.kind = omega_kind_from(omega.string("kind").value_or("zero"), "[initial.omega] kind");
    cfg.omega.k = static_cast<int>(omega.integer("k", 1));
    cfg.omega.eta_index = static_cast<int>(omega.integer("eta_index", 0));
    cfg.omega.amplitude = omega.number("amplitude", 0.0);
    omega.finish();
    init.finish();

    Section sw = top.sub("switches");
    std::optional<bool> couette = sw.boolean("couette");
    if (auto shear = sw.boolean("shear")) {
        if (couette && *couette != *shear) throw ConfigError("[switches] couette and shear disagree");
        couette = shear;
    }
    cfg.switches.couette = couette.value_or(true);
    const bool passive = sw.boolean("passive", false);
    cfg.switches.chemotaxis = sw.boolean("chemotaxis", !passive);
    cfg.switches.fluid_forcing = sw.boolean("fluid_forcing", !passive);
    cfg.switches.nonlinear = sw.boolean("nonlinear", !passive);
    if (passive && (cfg.switches.chemotaxis || cfg.switches.fluid_forcing || cfg.switches.nonlinear))
        throw ConfigError("[switches] passive = true contradicts an explicit coupling switch set to true");
    sw.finish();

    Section time = top.sub("time");
    cfg.t_max = time.number("t_max", cfg.t_max);
    cfg.out_interval = time.number("out_interval", cfg.out_interval);
    cfg.control.dt_max = time.number("dt_max", cfg.control.dt_max);
    cfg.control.cfl = time.number("cfl", cfg.control.cfl);
    cfg.control.ed_fraction = time.number("ed_fraction", cfg.control.ed_fraction);
    cfg.control.reaction = time.number("reaction", cfg.control.reaction);
    time.finish();

    Section det = top.sub("detector");
    cfg.detector.blowup_factor = det.number("blowup_factor", cfg.detector.blowup_factor);
    cfg.detector.tail_threshold = det.number("tail_threshold", cfg.detector.tail_threshold);
    det.finish();

    Section run = top.sub("run");
    cfg.seed = static_cast<std::uint64_t>(run.integer("seed", 0));
    cfg.mass_tolerance = run.number("mass_tolerance", cfg.mass_tolerance);
    cfg.resolution_tolerance = run.number("resolution_tolerance", cfg.resolution_tolerance);
    cfg.check_resolution = run.boolean("check_resolution", cfg.check_resolution);
    cfg.checkpoint_every = static_cast<int>(run.integer("checkpoint_every", cfg.checkpoint_every));
    out.output_dir = run.string("output_dir").value_or(cfg.name);
    out.force = run.boolean("force", false);
    run.finish();

    (void)root;
    try {
        cfg.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid run configuration: ") + e.what());
    }
    return cfg;
}

void parse_sweep(Section sec, ParsedConfig& out) {
    SweepConfig& sw = out.sweep;
    sw.base = out.run;
    sw.workers = static_cast<int>(sec.integer("workers", 1));
    if (sw.workers < 1) throw ConfigError("[sweep] workers must be >= 1");
    sw.resume = sec.boolean("resume", false);
    sw.axes.kappa = sec.numbers("kappa");
    sw.axes.nu = sec.numbers("nu");
    sw.axes.epsilon = sec.numbers("epsilon");
    sw.axes.mass = sec.numbers("M");
    sw.axes.sigma = sec.numbers("sigma");
    if (const toml::array* c = sec.array("couette"))
        for (const toml::node& e : *c) {
            auto v = e.value<bool>();
            if (!v) throw ConfigError("[sweep] couette: expected an array of booleans");
            sw.axes.couette.push_back(*v);
        }
    if (const toml::array* g = sec.array("grid"))
        for (const toml::node& e : *g) {
            const toml::array* pair = e.as_array();
            if (!pair || pair->size() < 2 || pair->size() > 3)
                throw ConfigError("[sweep] grid: expected entries [nx, ny] or [nx, ny, ly]");
            GridSpec spec = sw.base.grid;
            spec.nx = static_cast<int>(pair->at(0).value<std::int64_t>().value_or(0));
            spec.ny = static_cast<int>(pair->at(1).value<std::int64_t>().value_or(0));
            if (pair->size() == 3) spec.ly = pair->at(2).value<double>().value_or(0.0);
            try {
                (void)make_grid(spec.nx, spec.ny, spec.ly);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("[sweep] grid: ") + e.what());
            }
            sw.axes.grid.push_back(spec);
        }
    sec.finish();
}

void parse_lemma(Section sec, LemmaConfig& lemma) {
    lemma.samples = static_cast<int>(sec.integer("samples", lemma.samples));
    if (lemma.samples < 1) throw ConfigError("[lemma] samples must be >= 1");
    lemma.ranges.t_max = sec.number("t_max", lemma.ranges.t_max);
    lemma.ranges.k_max = static_cast<int>(sec.integer("k_max", lemma.ranges.k_max));
    lemma.ranges.eta_max = sec.number("eta_max", lemma.ranges.eta_max);
    if (auto v = sec.numbers("iotas"); !v.empty()) lemma.iotas = v;
    for (double i : lemma.iotas)
        if (!(i > 0.0 && i <= 1.0)) throw ConfigError("[lemma] iotas must lie in (0, 1]");
    lemma.seed = static_cast<std::uint64_t>(sec.integer("seed", static_cast<std::int64_t>(lemma.seed)));
    lemma.slack = sec.number("slack", lemma.slack);
    if (const toml::array* a = sec.array("commutator_s")) {
        lemma.commutator_s.clear();
        for (const toml::node& e : *a) {
            auto v = e.value<std::int64_t>();
            if (!v || *v < 0) throw ConfigError("[lemma] commutator_s: expected non-negative integers");
            lemma.commutator_s.push_back(static_cast<int>(*v));
        }
    }
    lemma.commutator_samples = static_cast<int>(sec.integer("commutator_samples", lemma.commutator_samples));
    sec.finish();
}

ParsedConfig parse_table(const toml::table& root) {
    ParsedConfig out;
    Section top(&root, "");
    const std::string kind = top.string("kind").value_or(root.contains("sweep")    ? "sweep"
                                                         : root.contains("lemma") ? "lemma"
                                                                                  : "run");
    if (kind == "lemma") {
        out.kind = ConfigKind::lemma;
        out.run.name = top.string("name").value_or("lemma-verify");
        parse_lemma(top.sub("lemma"), out.lemma);
        Section run = top.sub("run");
        out.output_dir = run.string("output_dir").value_or(out.run.name);
        out.force = run.boolean("force", false);
        run.finish();
        top.finish();
        return out;
    }
    if (kind != "run" && kind != "sweep") throw ConfigError("kind: expected run, sweep or lemma (got '" + kind + "')");
    out.run = parse_run(root, out, top);
    out.kind = ConfigKind::run;
    if (kind == "sweep") {
        out.kind = ConfigKind::sweep;
        parse_sweep(top.sub("sweep"), out);
    }
    top.finish();
    return out;
}

}  // namespace

std::filesystem::path output_root() {
    if (const char* env = std::getenv(kOutputRootEnv); env && *env) return std::filesystem::path(env);
    return std::filesystem::current_path() / "pks-output";
}

std::filesystem::path resolve_output_dir(const ParsedConfig& config) {
    std::filesystem::path p(config.output_dir.empty() ? config.run.name : config.output_dir);
    if (p.is_absolute()) return p;
    return output_root() / p;
}

ParsedConfig parse_config_string(const std::string& text, const std::string& origin) {
    toml::table root;
    try {
        root = toml::parse(text, origin);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << origin << ": TOML parse error at line " << e.source().begin.line << ": " << e.description();
        throw ConfigError(msg.str());
    }
    return parse_table(root);
}

ParsedConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    ParsedConfig cfg = parse_config_string(ss.str(), path.string());
    cfg.source = path;
    return cfg;
}

std::string resolved_run_toml(const RunConfig& run, const std::string& output_dir) {
    std::ostringstream o;
    const PhysParams& p = run.params;
    o << "# resolved configuration; every default filled in\n";
    o << "kind = \"run\"\n";
    o << "name = " << quoted(run.name) << "\n\n";
    o << "[paper]\n";
    o << "kappa = " << fmt_double(p.kappa) << "\n";
    o << "nu = " << fmt_double(p.nu) << "\n";
    o << "epsilon = " << fmt_double(p.epsilon) << "\n";
    o << "delta = " << fmt_double(p.delta) << "\n";
    o << "s = " << p.s << "\n";
    o << "M = " << fmt_double(run.total_mass()) << "\n\n";
    o << "[grid]\n";
    o << "nx = " << run.grid.nx << "\n";
    o << "ny = " << run.grid.ny << "\n";
    o << "ly = " << fmt_double(run.grid.ly) << "\n\n";
    o << "[initial]\n";
    for (const Blob& b : run.blobs) {
        o << "[[initial.blob]]\n";
        o << "mass = " << fmt_double(b.mass) << "\n";
        o << "z = " << fmt_double(b.z) << "\n";
        o << "y = " << fmt_double(b.y) << "\n";
        o << "sigma = " << fmt_double(b.sigma) << "\n";
    }
    o << "\n[initial.omega]\n";
    o << "kind = " << quoted(omega_kind_name(run.omega.kind)) << "\n";
    o << "k = " << run.omega.k << "\n";
    o << "eta_index = " << run.omega.eta_index << "\n";
    o << "amplitude = " << fmt_double(run.omega.amplitude) << "\n\n";
    o << "[switches]\n";
    o << "couette = " << (run.switches.couette ? "true" : "false") << "\n";
    o << "chemotaxis = " << (run.switches.chemotaxis ? "true" : "false") << "\n";
    o << "fluid_forcing = " << (run.switches.fluid_forcing ? "true" : "false") << "\n";
    o << "nonlinear = " << (run.switches.nonlinear ? "true" : "false") << "\n\n";
    o << "[time]\n";
    o << "t_max = " << fmt_double(run.t_max) << "\n";
    o << "out_interval = " << fmt_double(run.out_interval) << "\n";
    o << "dt_max = " << fmt_double(run.control.dt_max) << "\n";
    o << "cfl = " << fmt_double(run.control.cfl) << "\n";
    o << "ed_fraction = " << fmt_double(run.control.ed_fraction) << "\n";
    o << "reaction = " << fmt_double(run.control.reaction) << "\n\n";
    o << "[detector]\n";
    o << "blowup_factor = " << fmt_double(run.detector.blowup_factor) << "\n";
    o << "tail_threshold = " << fmt_double(run.detector.tail_threshold) << "\n\n";
    o << "[run]\n";
    o << "seed = " << run.seed << "\n";
    o << "mass_tolerance = " << fmt_double(run.mass_tolerance) << "\n";
    o << "resolution_tolerance = " << fmt_double(run.resolution_tolerance) << "\n";
    o << "check_resolution = " << (run.check_resolution ? "true" : "false") << "\n";
    o << "checkpoint_every = " << run.checkpoint_every << "\n";
    o << "output_dir = " << quoted(output_dir) << "\n";
    return o.str();
}

std::string resolved_config_toml(const ParsedConfig& config) {
    if (config.kind == ConfigKind::lemma) {
        const LemmaConfig& l = config.lemma;
        std::ostringstream o;
        o << "kind = \"lemma\"\n";
        o << "name = " << quoted(config.run.name) << "\n\n";
        o << "[lemma]\n";
        o << "samples = " << l.samples << "\n";
        o << "t_max = " << fmt_double(l.ranges.t_max) << "\n";
        o << "k_max = " << l.ranges.k_max << "\n";
        o << "eta_max = " << fmt_double(l.ranges.eta_max) << "\n";
        o << "iotas = [";
        for (std::size_t i = 0; i < l.iotas.size(); ++i) o << (i ? ", " : "") << fmt_double(l.iotas[i]);
        o << "]\n";
        o << "seed = " << l.seed << "\n";
        o << "slack = " << fmt_double(l.slack) << "\n";
        o << "commutator_s = [";
        for (std::size_t i = 0; i < l.commutator_s.size(); ++i) o << (i ? ", " : "") << l.commutator_s[i];
        o << "]\n";
        o << "commutator_samples = " << l.commutator_samples << "\n\n";
        o << "[run]\noutput_dir = " << quoted(config.output_dir) << "\n";
        return o.str();
    }
    std::string text = resolved_run_toml(config.run, config.output_dir);
    if (config.kind == ConfigKind::sweep) {
        text.replace(text.find("kind = \"run\""), 12, "kind = \"sweep\"");
        const SweepAxes& a = config.sweep.axes;
        std::ostringstream o;
        auto list = [&](const char* key, const std::vector<double>& v) {
            if (v.empty()) return;
            o << key << " = [";
            for (std::size_t i = 0; i < v.size(); ++i) o << (i ? ", " : "") << fmt_double(v[i]);
            o << "]\n";
        };
        o << "\n[sweep]\n";
        o << "workers = " << config.sweep.workers << "\n";
        list("kappa", a.kappa);
        list("nu", a.nu);
        list("epsilon", a.epsilon);
        list("M", a.mass);
        list("sigma", a.sigma);
        if (!a.couette.empty()) {
            o << "couette = [";
            for (std::size_t i = 0; i < a.couette.size(); ++i) o << (i ? ", " : "") << (a.couette[i] ? "true" : "false");
            o << "]\n";
        }
        if (!a.grid.empty()) {
            o << "grid = [";
            for (std::size_t i = 0; i < a.grid.size(); ++i)
                o << (i ? ", " : "") << "[" << a.grid[i].nx << ", " << a.grid[i].ny << ", " << fmt_double(a.grid[i].ly)
                  << "]";
            o << "]\n";
        }
        text += o.str();
    }
    return text;
}

std::filesystem::path preset_path(const std::string& name) {
    std::vector<std::filesystem::path> dirs;
    if (const char* env = std::getenv("PKS_PRESET_DIR"); env && *env) dirs.emplace_back(env);
    if (*PKS_PRESET_DIR) dirs.emplace_back(PKS_PRESET_DIR);
    for (const auto& d : dirs) {
        const auto p = d / (name + ".toml");
        if (std::filesystem::exists(p)) return p;
    }
    return {};
}

std::vector<std::string> preset_names() {
    return {"lemma-verify", "linear-oracle", "blowup-noshear", "suppression-couette", "epsilon-sweep"};
}

}  // namespace pks::harness
