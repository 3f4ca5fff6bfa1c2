#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "pks/harness/config.hpp"
#include "pks/lemma_suite.hpp"

namespace pks::harness {

/// Commutator-constant estimate at base ranges and at doubled frequency ranges.
struct CommutatorStudy {
    int s = 0;
    double iota = 0.0;
    CommutatorSample base;
    CommutatorSample doubled;
    double ratio() const { return base.value > 0.0 ? doubled.value / base.value : 0.0; }
    bool saturated() const { return ratio() > 0.5 && ratio() < 2.0; }
};

std::vector<CommutatorStudy> commutator_studies(const LemmaConfig& config);

struct LemmaRun {
    LemmaReport report;
    std::vector<CommutatorStudy> commutator;
    double seconds = 0.0;
    nlohmann::ordered_json to_json(const LemmaConfig& config) const;
};

LemmaRun run_lemma(const LemmaConfig& config);

/// Runs the suite and writes lemma_report.json into `dir`.
LemmaRun run_lemma_to(const LemmaConfig& config, const std::filesystem::path& dir);

}  // namespace pks::harness
