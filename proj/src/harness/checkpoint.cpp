#include "pks/harness/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pks::harness {

namespace {

void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

std::uint64_t get_u64(const std::vector<unsigned char>& in, std::size_t pos) {
    if (pos + 8 > in.size()) throw std::runtime_error("checkpoint truncated");
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(in[pos + b]) << (8 * b);
    return v;
}

void put_f64(std::vector<unsigned char>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(const std::vector<unsigned char>& in, std::size_t pos) { return std::bit_cast<double>(get_u64(in, pos)); }

const std::vector<std::string>& scalar_names() {
    static const std::vector<std::string> names = {
        "t",          "n_time",      "omega_time",  "kappa",       "nu",          "epsilon",    "delta",
        "mass",       "acc_t",       "last_n_dtM",  "last_n_diss", "last_w_dtM",  "last_w_diss", "last_w0_diss",
        "tot_n_dtM",  "tot_n_diss",  "tot_w_dtM",   "tot_w_diss",  "tot_w0_diss", "initial_sup", "peak_sup",
        "initial_mass", "last_dt"};
    return names;
}

}  // namespace

std::vector<unsigned char> encode_checkpoint(const RunCheckpoint& ck) {
    const SimState& s = ck.state;
    const Grid& g = *s.n.grid;
    const BootstrapIntegrands& last = ck.accumulator.last();
    const BootstrapIntegrands& tot = ck.accumulator.totals();
    const std::vector<double> scalars = {s.t,
                                         s.n.time,
                                         s.omega.time,
                                         s.params.kappa,
                                         s.params.nu,
                                         s.params.epsilon,
                                         s.params.delta,
                                         s.params.mass,
                                         ck.accumulator.time(),
                                         last.n_dtM,
                                         last.n_diss,
                                         last.w_dtM,
                                         last.w_diss,
                                         last.w0_diss,
                                         tot.n_dtM,
                                         tot.n_diss,
                                         tot.w_dtM,
                                         tot.w_diss,
                                         tot.w0_diss,
                                         ck.history.initial_sup,
                                         ck.history.peak_sup,
                                         ck.initial_mass,
                                         ck.last_dt};
    nlohmann::ordered_json h;
    h["format"] = "pks-checkpoint";
    h["format_version"] = kCheckpointFormatVersion;
    h["grid"] = {{"nx", g.nx}, {"ny", g.ny}, {"ly", g.ly}};
    h["t"] = s.t;
    h["params"] = {{"kappa", s.params.kappa}, {"nu", s.params.nu},   {"epsilon", s.params.epsilon},
                   {"delta", s.params.delta}, {"s", s.params.s},     {"M", s.params.mass}};
    h["steps"] = ck.steps;
    h["next_output"] = ck.next_output;
    h["payload"] = {{"fields", {"N", "Omega"}},
                    {"layout", "row-major (k, eta), complex as interleaved re, im little-endian float64"},
                    {"scalars", scalar_names()}};
    const std::string header = h.dump();

    std::vector<unsigned char> out;
    out.reserve(8 + header.size() + 16 * 2 * g.size() + 8 * scalars.size());
    put_u64(out, header.size());
    out.insert(out.end(), header.begin(), header.end());
    for (const SpectralField* f : {&s.n, &s.omega})
        for (const Complex& c : f->coeffs) {
            put_f64(out, c.real());
            put_f64(out, c.imag());
        }
    for (double v : scalars) put_f64(out, v);
    return out;
}

RunCheckpoint decode_checkpoint(const std::vector<unsigned char>& bytes) {
    const std::uint64_t len = get_u64(bytes, 0);
    if (8 + len > bytes.size()) throw std::runtime_error("checkpoint header truncated");
    const nlohmann::json h = nlohmann::json::parse(bytes.begin() + 8, bytes.begin() + 8 + static_cast<long>(len));
    if (h.value("format", "") != "pks-checkpoint") throw std::runtime_error("not a checkpoint file");
    if (h.at("format_version").get<int>() != kCheckpointFormatVersion)
        throw std::runtime_error("unsupported checkpoint format version");
    GridPtr grid = make_grid(h.at("grid").at("nx").get<int>(), h.at("grid").at("ny").get<int>(),
                             h.at("grid").at("ly").get<double>());
    const std::size_t n = grid->size();
    const std::size_t names = h.at("payload").at("scalars").size();
    std::size_t pos = 8 + len;
    if (pos + 8 * (4 * n + names) != bytes.size()) throw std::runtime_error("checkpoint payload has the wrong size");

    RunCheckpoint ck;
    ck.state.n = SpectralField::zeros(grid);
    ck.state.omega = SpectralField::zeros(grid);
    for (SpectralField* f : {&ck.state.n, &ck.state.omega})
        for (Complex& c : f->coeffs) {
            c = Complex(get_f64(bytes, pos), get_f64(bytes, pos + 8));
            pos += 16;
        }
    std::vector<double> sc(names);
    for (double& v : sc) {
        v = get_f64(bytes, pos);
        pos += 8;
    }
    if (names != scalar_names().size()) throw std::runtime_error("checkpoint scalar block mismatch");
    std::size_t i = 0;
    ck.state.t = sc[i++];
    ck.state.n.time = sc[i++];
    ck.state.omega.time = sc[i++];
    ck.state.params.kappa = sc[i++];
    ck.state.params.nu = sc[i++];
    ck.state.params.epsilon = sc[i++];
    ck.state.params.delta = sc[i++];
    ck.state.params.mass = sc[i++];
    ck.state.params.s = h.at("params").at("s").get<int>();
    const double acc_t = sc[i++];
    BootstrapIntegrands last, tot;
    for (double* p : {&last.n_dtM, &last.n_diss, &last.w_dtM, &last.w_diss, &last.w0_diss}) *p = sc[i++];
    for (double* p : {&tot.n_dtM, &tot.n_diss, &tot.w_dtM, &tot.w_diss, &tot.w0_diss}) *p = sc[i++];
    ck.accumulator.restore(acc_t, last, tot);
    ck.history.initial_sup = sc[i++];
    ck.history.peak_sup = sc[i++];
    ck.initial_mass = sc[i++];
    ck.last_dt = sc[i++];
    ck.steps = h.at("steps").get<std::int64_t>();
    ck.next_output = h.at("next_output").get<std::int64_t>();
    return ck;
}

void write_checkpoint(const std::filesystem::path& path, const RunCheckpoint& ck) {
    const std::vector<unsigned char> bytes = encode_checkpoint(ck);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

RunCheckpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_checkpoint(bytes);
}

}  // namespace pks::harness
