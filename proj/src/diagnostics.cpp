#include "pks/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pks/spectral_ops.hpp"

namespace pks {

double mass(const SpectralField& n) { return n.grid->area() * n(0, 0).real(); }

FreeEnergy free_energy(const SpectralField& n, const SpectralField& c, const VelocityField& u) {
    const Grid& g = *n.grid;
    const std::vector<double> pn = n.to_physical();
    const std::vector<double> pc = c.to_physical();
    const std::vector<double> pu1 = u.u1.to_physical();
    const std::vector<double> pu2 = u.u2.to_physical();
    const double dA = g.cell_area();
    double entropy = 0.0, interaction = 0.0, kinetic = 0.0, clamped = 0.0, total = 0.0;
    for (std::size_t p = 0; p < pn.size(); ++p) {
        const double v = pn[p];
        total += std::abs(v);
        if (v > 0.0)
            entropy += v * std::log(v);
        else
            clamped -= v;
        interaction += v * pc[p];
        kinetic += pu1[p] * pu1[p] + pu2[p] * pu2[p];
    }
    FreeEnergy out;
    out.E = dA * (entropy - 0.5 * interaction);
    out.F = out.E + 0.5 * dA * kinetic;
    out.clamped_mass_fraction = total > 0.0 ? clamped / total : 0.0;
    out.clamp_flag = out.clamped_mass_fraction > 1e-4;
    return out;
}

FreeEnergy free_energy(const SimState& state, const Switches& sw) {
    const double tau = shear_time(state.t, sw);
    return free_energy(state.n, solve_chemical(state.n, tau), biot_savart(state.omega, tau));
}

double second_moment(const SpectralField& n) {
    const Grid& g = *n.grid;
    const std::vector<double> profile = zero_mode_profile(n);
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j) sum += profile[j] * g.y(j) * g.y(j);
    return sum * g.lx * g.dy();
}

double sobolev_norm_sq(const SpectralField& f, int s) {
    const Grid& g = *f.grid;
    double sum = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        const double k = g.kz[i];
        for (int j = 0; j < g.ny; ++j) {
            const double e = std::norm(f(i, j));
            if (e == 0.0) continue;
            sum += std::pow(1.0 + k * k + g.ky[j] * g.ky[j], s) * e;
        }
    }
    return g.area() * sum;
}

double zero_mode_sobolev_norm_sq(const SpectralField& f, int s) {
    const Grid& g = *f.grid;
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j) sum += std::pow(1.0 + g.ky[j] * g.ky[j], s) * std::norm(f(0, j));
    return g.ly * sum;
}

double weighted_norm_neq_sq(const SpectralField& f, const MultiplierSpec& spec, double t) {
    const Grid& g = *f.grid;
    double sum = 0.0;
    for (int i = 1; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const double e = std::norm(f(i, j));
            if (e == 0.0) continue;
            const double a = A_iota(t, g.kz[i], g.ky[j], spec);
            sum += a * a * e;
        }
    return g.area() * sum;
}

double mode_norm(const SpectralField& f, int k) {
    const Grid& g = *f.grid;
    if (k < 0 || 2 * k >= g.nx) throw std::invalid_argument("mode_norm: k out of range");
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j) sum += std::norm(f(k, j));
    return std::sqrt(g.area() * sum);
}

BootstrapIntegrands bootstrap_integrands(const SimState& state, const Switches& sw) {
    const Grid& g = *state.n.grid;
    const double t = state.t;
    const double tau = shear_time(t, sw);
    const MultiplierSpec ms_n = state.params.cell_multiplier();
    const MultiplierSpec ms_w = state.params.fluid_multiplier();
    BootstrapIntegrands out;
    for (int i = 1; i < g.nx; ++i) {
        const double k = g.kz[i];
        for (int j = 0; j < g.ny; ++j) {
            const double en = std::norm(state.n(i, j));
            const double ew = std::norm(state.omega(i, j));
            if (en == 0.0 && ew == 0.0) continue;
            const double eta = g.ky[j];
            const double lap = -laplacian_L_symbol(k, eta, tau);
            if (en != 0.0) {
                const double a = A_iota(t, k, eta, ms_n);
                const double rate = -dt_M_iota(t, k, eta, ms_n) / M_iota(t, k, eta, ms_n);
                out.n_dtM += rate * a * a * en;
                out.n_diss += lap * a * a * en;
            }
            if (ew != 0.0) {
                const double a = A_iota(t, k, eta, ms_w);
                const double rate = -dt_M_iota(t, k, eta, ms_w) / M_iota(t, k, eta, ms_w);
                out.w_dtM += rate * a * a * ew;
                out.w_diss += lap * a * a * ew;
            }
        }
    }
    const int s = state.params.s;
    for (int j = 0; j < g.ny; ++j) {
        const double eta = g.ky[j];
        out.w0_diss += std::pow(1.0 + eta * eta, s) * eta * eta * std::norm(state.omega(0, j));
    }
    out.n_dtM *= g.area();
    out.n_diss *= g.area();
    out.w_dtM *= g.area();
    out.w_diss *= g.area();
    out.w0_diss *= g.ly;
    return out;
}

void BootstrapAccumulator::reset(const SimState& state) {
    t_ = state.t;
    last_ = bootstrap_integrands(state, sw_);
    totals_ = {};
}

void BootstrapAccumulator::advance(const SimState& state) {
    const BootstrapIntegrands cur = bootstrap_integrands(state, sw_);
    const double h = 0.5 * (state.t - t_);
    totals_.n_dtM += h * (last_.n_dtM + cur.n_dtM);
    totals_.n_diss += h * (last_.n_diss + cur.n_diss);
    totals_.w_dtM += h * (last_.w_dtM + cur.w_dtM);
    totals_.w_diss += h * (last_.w_diss + cur.w_diss);
    totals_.w0_diss += h * (last_.w0_diss + cur.w0_diss);
    last_ = cur;
    t_ = state.t;
}

void BootstrapAccumulator::restore(double t, const BootstrapIntegrands& last, const BootstrapIntegrands& totals) {
    t_ = t;
    last_ = last;
    totals_ = totals;
}

DiagnosticsRecord compute_record(const SimState& state, const Switches& sw, const BootstrapAccumulator& acc,
                                 double dt) {
    const Grid& g = *state.n.grid;
    const PhysParams& p = state.params;
    DiagnosticsRecord r;
    r.t = state.t;
    r.dt = dt;
    r.mass = mass(state.n);
    const FreeEnergy fe = free_energy(state, sw);
    r.free_energy_F = fe.F;
    r.energy_E = fe.E;
    r.clamped_mass_fraction = fe.clamped_mass_fraction;
    r.second_moment = second_moment(state.n);

    const std::vector<double> phys = state.n.to_physical();
    const auto [lo, hi] = std::minmax_element(phys.begin(), phys.end());
    r.min_N = *lo;
    r.sup_N = *hi;
    double outer = 0.0, total = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const double v = std::abs(phys[g.index(i, j)]);
            total += v;
            if (std::abs(g.y(j)) > 0.4 * g.ly) outer += v;
        }
    r.boundary_mass_fraction = total > 0.0 ? outer / total : 0.0;

    const double an = weighted_norm_neq_sq(state.n, p.cell_multiplier(), state.t);
    const double aw = weighted_norm_neq_sq(state.omega, p.fluid_multiplier(), state.t);
    const double n0 = zero_mode_sobolev_norm_sq(state.n, p.s);
    const double w0 = zero_mode_sobolev_norm_sq(state.omega, p.s);
    r.norm_AkappaN_neq = std::sqrt(an);
    r.norm_AnuOmega_neq = std::sqrt(aw);
    r.norm_N0_Hs = std::sqrt(n0);
    r.norm_Omega0_Hs = std::sqrt(w0);

    r.integrals = acc.totals();
    const BootstrapIntegrands& I = r.integrals;
    r.hypotheses = {an + I.n_dtM + p.kappa * I.n_diss, n0, aw + I.w_dtM + p.nu * I.w_diss, w0 + p.nu * I.w0_diss};

    for (int k = 1; k <= 3; ++k) r.mode_norm_N[k - 1] = 2 * k < g.nx ? mode_norm(state.n, k) : 0.0;
    r.tail_fraction = spectral_tail_fraction(state.n);
    r.k_active = std::max(active_k_max(state.n), active_k_max(state.omega));
    return r;
}

const std::vector<std::string>& record_columns() {
    static const std::vector<std::string> cols = {
        "t",           "dt",          "mass",        "free_energy_F",     "energy_E",
        "clamped_mass_fraction",     "second_moment", "min_N",           "sup_N",
        "norm_AkappaN_neq",          "norm_AnuOmega_neq", "norm_N0_Hs",  "norm_Omega0_Hs",
        "int_N_dtM",   "int_N_diss",  "int_Omega_dtM", "int_Omega_diss", "int_Omega0_diss",
        "hyp_N_neq",   "hyp_N0",      "hyp_Omega_neq", "hyp_Omega0",     "boundary_mass_fraction",
        "mode_N_k1",   "mode_N_k2",   "mode_N_k3",   "tail_fraction",     "k_active"};
    return cols;
}

std::vector<double> record_values(const DiagnosticsRecord& r) {
    const BootstrapIntegrands& I = r.integrals;
    return {r.t,
            r.dt,
            r.mass,
            r.free_energy_F,
            r.energy_E,
            r.clamped_mass_fraction,
            r.second_moment,
            r.min_N,
            r.sup_N,
            r.norm_AkappaN_neq,
            r.norm_AnuOmega_neq,
            r.norm_N0_Hs,
            r.norm_Omega0_Hs,
            I.n_dtM,
            I.n_diss,
            I.w_dtM,
            I.w_diss,
            I.w0_diss,
            r.hypotheses[0],
            r.hypotheses[1],
            r.hypotheses[2],
            r.hypotheses[3],
            r.boundary_mass_fraction,
            r.mode_norm_N[0],
            r.mode_norm_N[1],
            r.mode_norm_N[2],
            r.tail_fraction,
            static_cast<double>(r.k_active)};
}

DiagnosticsRecord record_from_values(std::span<const double> v) {
    if (v.size() != record_columns().size()) throw std::invalid_argument("record_from_values: wrong column count");
    DiagnosticsRecord r;
    std::size_t c = 0;
    r.t = v[c++];
    r.dt = v[c++];
    r.mass = v[c++];
    r.free_energy_F = v[c++];
    r.energy_E = v[c++];
    r.clamped_mass_fraction = v[c++];
    r.second_moment = v[c++];
    r.min_N = v[c++];
    r.sup_N = v[c++];
    r.norm_AkappaN_neq = v[c++];
    r.norm_AnuOmega_neq = v[c++];
    r.norm_N0_Hs = v[c++];
    r.norm_Omega0_Hs = v[c++];
    r.integrals.n_dtM = v[c++];
    r.integrals.n_diss = v[c++];
    r.integrals.w_dtM = v[c++];
    r.integrals.w_diss = v[c++];
    r.integrals.w0_diss = v[c++];
    for (double& h : r.hypotheses) h = v[c++];
    r.boundary_mass_fraction = v[c++];
    for (double& m : r.mode_norm_N) m = v[c++];
    r.tail_fraction = v[c++];
    r.k_active = static_cast<int>(v[c++]);
    return r;
}

RateFit fit_enhanced_dissipation_rate(std::span<const double> t, std::span<const double> amplitude,
                                      double min_decades) {
    if (t.size() != amplitude.size()) throw std::invalid_argument("rate fit: t and amplitude differ in length");
    if (t.empty()) throw WindowTooShort("rate fit: empty history");
    const std::size_t peak = static_cast<std::size_t>(
        std::max_element(amplitude.begin(), amplitude.end()) - amplitude.begin());
    const double amax = amplitude[peak];
    RateFit fit;
    if (!(amax > 0.0)) throw WindowTooShort("rate fit: amplitude identically zero");
    std::size_t begin = peak;
    while (begin < amplitude.size() && amplitude[begin] >= 0.5 * amax) ++begin;
    if (begin == amplitude.size()) return fit;  // never decays
    const double floor = 1e-13 * amax;
    std::size_t end = begin;
    while (end < amplitude.size() && amplitude[end] > floor && std::isfinite(amplitude[end])) ++end;
    const std::size_t count = end - begin;
    fit.decaying = true;
    fit.points = static_cast<int>(count);
    if (count < 3) throw WindowTooShort("rate fit: fewer than 3 samples in the decay window");
    fit.t_begin = t[begin];
    fit.t_end = t[end - 1];
    fit.decades = std::log10(amplitude[begin] / amplitude[end - 1]);
    if (fit.decades < min_decades)
        throw WindowTooShort("rate fit: decay window spans " + std::to_string(fit.decades) + " decades, need " +
                             std::to_string(min_decades));
    double st = 0.0, sl = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        st += t[i];
        sl += std::log(amplitude[i]);
    }
    const double mt = st / count, ml = sl / count;
    double num = 0.0, den = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double dt = t[i] - mt;
        num += dt * (std::log(amplitude[i]) - ml);
        den += dt * dt;
    }
    fit.rate = -num / den;
    return fit;
}

double enhanced_dissipation_bound(double kappa, double delta, int k) {
    return delta * std::cbrt(kappa) * std::pow(std::abs(k), 2.0 / 3.0);
}

}  // namespace pks
