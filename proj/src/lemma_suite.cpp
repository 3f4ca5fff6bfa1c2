#include "pks/lemma_suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pks/multipliers.hpp"

namespace pks {

namespace {

double relative_margin(double lhs, double rhs) {
    const double scale = std::max({std::abs(lhs), std::abs(rhs), std::numeric_limits<double>::min()});
    return (rhs - lhs) / scale;
}

class Tally {
public:
    Tally(std::string id, double iota, double slack, bool gating = true, std::string note = {})
        : slack_(slack) {
        report_.inequality_id = std::move(id);
        report_.iota = iota;
        report_.gating = gating;
        report_.note = std::move(note);
        report_.worst_margin = std::numeric_limits<double>::infinity();
    }

    void record(double margin) {
        ++report_.samples;
        if (margin < -slack_) ++report_.violations;
        report_.worst_margin = std::min(report_.worst_margin, margin);
    }

    InequalityReport finish() const {
        InequalityReport r = report_;
        if (r.samples == 0) r.worst_margin = 0.0;
        return r;
    }

private:
    double slack_;
    InequalityReport report_;
};

struct Sample {
    double t, k, eta, xi;
};

class Sampler {
public:
    Sampler(const LemmaRanges& ranges, double iota, std::uint64_t seed)
        : ranges_(ranges), band_k_(static_cast<int>(std::floor(1.0 / std::sqrt(iota) + 1e-9))), rng_(seed) {}

    Sample draw(long n) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_real_distribution<double> eta_dist(-ranges_.eta_max, ranges_.eta_max);
        Sample s{};
        // every third sample is drawn from the W_iota band to exercise the indicator-on regime
        const int kmax = (n % 3 == 2) ? std::min(band_k_, ranges_.k_max) : ranges_.k_max;
        std::uniform_int_distribution<int> k_dist(-kmax, kmax);
        s.k = k_dist(rng_);
        s.eta = eta_dist(rng_);
        s.t = ranges_.t_max * unit(rng_);
        if (n % 2 == 1 && s.k != 0.0) {
            const double critical = s.eta / s.k + (unit(rng_) - 0.5) * 10.0;
            if (critical >= 0.0 && critical <= ranges_.t_max) s.t = critical;
        }
        if (n % 4 >= 2) {
            std::normal_distribution<double> near(0.0, 2.0);
            s.xi = std::clamp(s.eta + near(rng_), -ranges_.eta_max, ranges_.eta_max);
        } else {
            s.xi = eta_dist(rng_);
        }
        return s;
    }

private:
    LemmaRanges ranges_;
    int band_k_;
    std::mt19937_64 rng_;
};

}  // namespace

long LemmaReport::gating_violations() const {
    long total = 0;
    for (const auto& e : entries)
        if (e.gating) total += e.violations;
    return total;
}

nlohmann::json LemmaReport::to_json() const {
    nlohmann::json out;
    out["schema_version"] = 1;
    out["slack"] = slack;
    out["total_gating_violations"] = gating_violations();
    out["entries"] = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json j{{"inequality_id", e.inequality_id}, {"iota", e.iota},
                         {"samples", e.samples},             {"violations", e.violations},
                         {"worst_margin", e.worst_margin},   {"gating", e.gating}};
        if (!e.note.empty()) j["note"] = e.note;
        out["entries"].push_back(std::move(j));
    }
    return out;
}

LemmaReport verify_lemma_suite(long samples_per_iota, const LemmaRanges& ranges, const std::vector<double>& iotas,
                               std::uint64_t seed, double slack) {
    LemmaReport report;
    report.slack = slack;
    const double pi2 = kPi * kPi;

    for (std::size_t which = 0; which < iotas.size(); ++which) {
        const double iota = iotas[which];
        MultiplierSpec spec;
        spec.iota = iota;
        spec.kappa = iota;
        spec.validate();

        Tally m1("M_1", iota, slack);
        Tally m1_literal("M_1_literal", iota, slack, false,
                         "M_iota == pi^2 for |k| outside (0, iota^{-1/2}]; holds only at k = 0 since W_cal != pi "
                         "for k != 0");
        Tally bound("M_bound", iota, slack);
        Tally dot("M_property_common_dot_M", iota, slack);
        Tally pa_eta("M_property_common_pa_eta", iota, slack);
        Tally m5("M_5", iota, slack);
        Tally ed("M_property_ED", iota, slack);

        Sampler sampler(ranges, iota, seed + 7919 * which);
        for (long n = 0; n < samples_per_iota; ++n) {
            const Sample s = sampler.draw(n);
            const double k = s.k;
            const double q = s.eta - k * s.t;
            const double m = M_iota(s.t, k, s.eta, spec);
            const double dtm = dt_M_iota(s.t, k, s.eta, spec);

            if (!in_band(k, iota)) {
                const double w = W_iota(s.t, k, s.eta, iota);
                const double expected = kPi * W_cal(s.t, k, s.eta);
                m1.record(std::min(w == kPi ? 0.0 : -1.0, -std::abs(m - expected) / m));
                m1_literal.record(-std::abs(m - pi2) / pi2);
            }

            bound.record(std::min(relative_margin(pi2 / 4.0, m), relative_margin(m, 9.0 * pi2 / 4.0)));

            if (k != 0.0) {
                dot.record(relative_margin(0.5 * kPi * k * k / (k * k + q * q), -dtm));
                pa_eta.record(relative_margin(std::abs(deta_M_iota(s.t, k, s.eta, spec)), 4.0 * kPi / std::abs(k)));
            }

            if (in_band(k, iota)) {
                const double dtm_xi = dt_M_iota(s.t, k, s.xi, spec);
                const double lhs = std::sqrt(-dtm) / std::sqrt(-dtm_xi);
                const double d = s.eta - s.xi;
                m5.record(relative_margin(lhs, 2.0 * std::sqrt(1.0 + d * d)));
            }

            const double ed_lhs = std::cbrt(iota * k * k) / (3.0 * kPi);
            const double ed_rhs = -dtm / m + iota * (k * k + q * q);
            ed.record(relative_margin(ed_lhs, ed_rhs));
        }

        for (const Tally* t : {&m1, &m1_literal, &bound, &dot, &pa_eta, &m5, &ed})
            report.entries.push_back(t->finish());
    }
    return report;
}

CommutatorSample commutator_constant(long samples, int s, const LemmaRanges& ranges, double iota,
                                     std::uint64_t seed) {
    MultiplierSpec spec;
    spec.iota = iota;
    spec.kappa = iota;
    spec.s = 0;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> t_dist(0.0, ranges.t_max);
    std::uniform_real_distribution<double> eta_dist(-ranges.eta_max, ranges.eta_max);
    std::uniform_int_distribution<int> k_dist(1, ranges.k_max);
    std::bernoulli_distribution sign(0.5);
    std::normal_distribution<double> near(0.0, 2.0);

    auto bracket = [s](double a, double b) { return std::pow(1.0 + a * a + b * b, 0.5 * s); };

    CommutatorSample best;
    for (long n = 0; n < samples; ++n) {
        const double t = t_dist(rng);
        const double k = k_dist(rng) * (sign(rng) ? 1.0 : -1.0);
        const double eta = eta_dist(rng);
        const double xi = (n % 2 == 0) ? eta_dist(rng) : std::clamp(eta + near(rng), -ranges.eta_max, ranges.eta_max);
        if (eta == xi) continue;
        const double lhs = std::abs(M_iota(t, k, eta, spec) * bracket(k, eta) - M_iota(t, k, xi, spec) * bracket(k, xi));
        const double d = eta - xi;
        const double value = lhs * std::abs(k) / (std::abs(d) * (bracket(0.0, d) + bracket(k, xi)));
        if (value > best.value) best = {value, t, k, eta, xi};
    }
    return best;
}

}  // namespace pks
