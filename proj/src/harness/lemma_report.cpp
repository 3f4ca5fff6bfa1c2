#include "pks/harness/lemma_report.hpp"

#include <chrono>
#include <fstream>

namespace pks::harness {

std::vector<CommutatorStudy> commutator_studies(const LemmaConfig& config) {
    std::vector<CommutatorStudy> out;
    LemmaRanges doubled = config.ranges;
    doubled.k_max *= 2;
    doubled.eta_max *= 2;
    for (int s : config.commutator_s)
        for (double iota : config.iotas) {
            CommutatorStudy c;
            c.s = s;
            c.iota = iota;
            c.base = commutator_constant(config.commutator_samples, s, config.ranges, iota, config.seed + 11);
            c.doubled = commutator_constant(config.commutator_samples, s, doubled, iota, config.seed + 13);
            out.push_back(c);
        }
    return out;
}

LemmaRun run_lemma(const LemmaConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    LemmaRun r;
    r.report = verify_lemma_suite(config.samples, config.ranges, config.iotas, config.seed, config.slack);
    r.commutator = commutator_studies(config);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

nlohmann::ordered_json LemmaRun::to_json(const LemmaConfig& config) const {
    nlohmann::ordered_json j;
    const nlohmann::json suite = report.to_json();
    for (auto it = suite.begin(); it != suite.end(); ++it) j[it.key()] = it.value();
    j["ranges"] = {{"t_max", config.ranges.t_max}, {"k_max", config.ranges.k_max}, {"eta_max", config.ranges.eta_max}};
    j["samples_per_iota"] = config.samples;
    j["seed"] = config.seed;
    nlohmann::ordered_json comm = nlohmann::ordered_json::array();
    auto sample = [](const CommutatorSample& c) {
        return nlohmann::ordered_json{{"value", c.value}, {"t", c.t}, {"k", c.k}, {"eta", c.eta}, {"xi", c.xi}};
    };
    for (const CommutatorStudy& c : commutator)
        comm.push_back({{"s", c.s},
                        {"iota", c.iota},
                        {"base", sample(c.base)},
                        {"doubled_ranges", sample(c.doubled)},
                        {"ratio", c.ratio()},
                        {"saturated", c.saturated()}});
    j["commutator_constant"] = comm;
    j["seconds"] = seconds;
    return j;
}

LemmaRun run_lemma_to(const LemmaConfig& config, const std::filesystem::path& dir) {
    LemmaRun r = run_lemma(config);
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / "lemma_report.json", std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / "lemma_report.json").string());
    out << r.to_json(config).dump(2) << "\n";
    return r;
}

}  // namespace pks::harness
