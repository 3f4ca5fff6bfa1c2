#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pks/lemma_suite.hpp"
#include "pks/run.hpp"

namespace pks::harness {

/// Error raised for malformed or invalid configuration; the message names the key.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ConfigKind { run, sweep, lemma };

struct LemmaConfig {
    int samples = 100000;
    LemmaRanges ranges;
    std::vector<double> iotas{1.0, 0.1, 0.01};
    std::uint64_t seed = 1;
    double slack = 1e-9;
    std::vector<int> commutator_s{2, 5};
    int commutator_samples = 20000;
};

/// Lists of values swept over; an empty axis keeps the base value.
struct SweepAxes {
    std::vector<double> kappa, nu, epsilon, mass, sigma;
    std::vector<GridSpec> grid;
    std::vector<bool> couette;
};

struct SweepConfig {
    RunConfig base;
    SweepAxes axes;
    int workers = 1;
    bool resume = false;
};

struct ParsedConfig {
    ConfigKind kind = ConfigKind::run;
    RunConfig run;
    SweepConfig sweep;
    LemmaConfig lemma;
    std::string output_dir;  // as written; resolved against the output root
    bool force = false;
    std::filesystem::path source;
};

/// Environment variable naming the directory relative output paths are placed under.
inline constexpr const char* kOutputRootEnv = "PKS_OUTPUT_ROOT";

std::filesystem::path output_root();

/// Absolute or output-root-relative directory for a parsed config.
std::filesystem::path resolve_output_dir(const ParsedConfig& config);

ParsedConfig parse_config(const std::filesystem::path& path);
ParsedConfig parse_config_string(const std::string& text, const std::string& origin = "<string>");

/// Fully resolved run config as TOML, including the [paper] section. Parsing the result
/// reproduces the same RunConfig.
std::string resolved_config_toml(const ParsedConfig& config);
std::string resolved_run_toml(const RunConfig& run, const std::string& output_dir);

/// Path of a shipped preset by name, or empty if unknown.
std::filesystem::path preset_path(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace pks::harness
