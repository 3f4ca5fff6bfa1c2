#include "pks/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pks/fft.hpp"
#include "pks/spectral_ops.hpp"

namespace pks {

double dissipation_integral(double k, double eta, double t0, double t1) {
    const double a = eta - k * t0;
    const double b = eta - k * t1;
    return (t1 - t0) * (k * k + (a * a + a * b + b * b) / 3.0);
}

SpectralField linear_propagator(const SpectralField& f, double iota, double t0, double t1, bool sheared) {
    require_frame(f, Frame::sheared, "linear_propagator");
    if (t1 < t0) throw std::invalid_argument("linear_propagator requires t1 >= t0");
    SpectralField out = f;
    if (t1 == t0) return out;
    const Grid& g = *f.grid;
    for (int i = 0; i < g.nx; ++i) {
        const double k = g.kz[i];
        for (int j = 0; j < g.ny; ++j) {
            const double eta = g.ky[j];
            const double integral =
                sheared ? dissipation_integral(k, eta, t0, t1) : (k * k + eta * eta) * (t1 - t0);
            out(i, j) *= std::exp(-iota * integral);
        }
    }
    clear_nyquist(out);
    out.time = sheared ? t1 : f.time;
    return out;
}

NonlinearEvaluator::NonlinearEvaluator(GridPtr grid) : grid_(std::move(grid)) {
    const std::size_t n = grid_->size();
    for (auto* v : {&spec_a_, &spec_b_, &spec_c_, &spec_d_, &spec_e_, &spec_f_, &phys_n_, &phys_w_, &phys_u1_,
                    &phys_u2_, &phys_cz_, &phys_cy_})
        v->assign(n, Complex{});
}

NonlinearTerms NonlinearEvaluator::operator()(const SpectralField& n, const SpectralField& omega, double t,
                                              const PhysParams& params, const Switches& sw) {
    require_frame(n, Frame::sheared, "rhs_nonlinear");
    require_frame(omega, Frame::sheared, "rhs_nonlinear");
    const Grid& g = *grid_;
    const double tau = shear_time(t, sw);
    const double kappa = params.kappa;
    const bool chem = sw.chemotaxis || sw.fluid_forcing;

    // spectral velocity and chemical gradient
    for (int i = 0; i < g.nx; ++i) {
        const double k = g.kz[i];
        for (int j = 0; j < g.ny; ++j) {
            const std::size_t p = g.index(i, j);
            spec_a_[p] = spec_b_[p] = spec_c_[p] = spec_d_[p] = Complex{};
            if (g.nyquist(i, j)) continue;
            const double q = sheared_eta(k, g.ky[j], tau);
            const double lap = k * k + q * q;
            if (!(i == 0 && j == 0)) {
                const Complex psi = -omega.coeffs[p] / lap;
                spec_a_[p] = -Complex(0.0, q) * psi;
                spec_b_[p] = Complex(0.0, k) * psi;
            }
            if (chem) {
                const Complex c = n.coeffs[p] / (1.0 + lap);
                spec_c_[p] = Complex(0.0, k) * c;
                spec_d_[p] = Complex(0.0, q) * c;
            }
        }
    }
    inverse_transform(g, n.coeffs, std::span<Complex>(phys_n_));
    inverse_transform(g, omega.coeffs, std::span<Complex>(phys_w_));
    inverse_transform(g, spec_a_, std::span<Complex>(phys_u1_));
    inverse_transform(g, spec_b_, std::span<Complex>(phys_u2_));
    if (chem) {
        inverse_transform(g, spec_c_, std::span<Complex>(phys_cz_));
        inverse_transform(g, spec_d_, std::span<Complex>(phys_cy_));
    }

    NonlinearTerms out{SpectralField::zeros(grid_, Frame::sheared, tau),
                       SpectralField::zeros(grid_, Frame::sheared, tau)};

    const double drift = sw.chemotaxis ? kappa : 0.0;
    const double inv_dz = 1.0 / g.dz();
    const double inv_dy = 1.0 / g.dy();
    double rate = 0.0;
    double sup_n = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
        const double nv = phys_n_[p].real();
        const double wv = phys_w_[p].real();
        const double u1 = phys_u1_[p].real();
        const double u2 = phys_u2_[p].real();
        const double cz = chem ? phys_cz_[p].real() : 0.0;
        const double cy = chem ? phys_cy_[p].real() : 0.0;
        const double v1 = u1 + drift * cz;
        const double v2 = u2 + drift * cy;
        rate = std::max(rate, std::abs(v1 - tau * v2) * inv_dz + std::abs(v2) * inv_dy);
        sup_n = std::max(sup_n, nv);
        phys_u1_[p] = Complex(u1 * nv, 0.0);  // U N
        phys_u2_[p] = Complex(u2 * nv, 0.0);
        phys_n_[p] = Complex(u1 * wv, 0.0);  // U Omega
        phys_w_[p] = Complex(u2 * wv, 0.0);
        phys_cz_[p] = Complex(nv * cz, 0.0);  // N grad_L C
        phys_cy_[p] = Complex(nv * cy, 0.0);
    }
    out.transport_rate = rate;
    out.sup_n = sup_n;

    forward_transform(g, std::span<const Complex>(phys_u1_), std::span<Complex>(spec_a_));
    forward_transform(g, std::span<const Complex>(phys_u2_), std::span<Complex>(spec_b_));
    forward_transform(g, std::span<const Complex>(phys_n_), std::span<Complex>(spec_c_));
    forward_transform(g, std::span<const Complex>(phys_w_), std::span<Complex>(spec_d_));
    if (chem) {
        forward_transform(g, std::span<const Complex>(phys_cz_), std::span<Complex>(spec_e_));
        forward_transform(g, std::span<const Complex>(phys_cy_), std::span<Complex>(spec_f_));
    }

    const double chem_n = sw.chemotaxis ? kappa : 0.0;
    const double chem_w = sw.fluid_forcing ? kappa : 0.0;
    for (int i = 0; i < g.nx; ++i) {
        const double k = g.kz[i];
        for (int j = 0; j < g.ny; ++j) {
            if (!g.retained(i, j) || g.nyquist(i, j)) continue;
            const std::size_t p = g.index(i, j);
            const Complex ik(0.0, k);
            const Complex iq(0.0, sheared_eta(k, g.ky[j], tau));
            const Complex ez = chem ? spec_e_[p] : Complex{};
            const Complex ey = chem ? spec_f_[p] : Complex{};
            out.dn.coeffs[p] = -(ik * (spec_a_[p] + chem_n * ez) + iq * (spec_b_[p] + chem_n * ey));
            out.domega.coeffs[p] = -(ik * spec_c_[p] + iq * spec_d_[p]) + chem_w * (-iq * ez + ik * ey);
        }
    }
    return out;
}

NonlinearTerms rhs_nonlinear(const SimState& state, const Switches& sw) {
    NonlinearEvaluator eval(state.n.grid);
    return eval(state.n, state.omega, state.t, state.params, sw);
}

Stepper::Stepper(GridPtr grid, Switches sw, StepControl control)
    : grid_(grid), sw_(sw), control_(control), eval_(grid) {}

double Stepper::stable_dt(const NonlinearTerms& terms, const PhysParams& params) const {
    double dt = control_.dt_max;
    if (terms.transport_rate > 0.0) dt = std::min(dt, control_.cfl / terms.transport_rate);
    dt = std::min(dt, control_.ed_fraction / std::cbrt(params.kappa));
    if (sw_.chemotaxis && terms.sup_n > 0.0) dt = std::min(dt, control_.reaction / (params.kappa * terms.sup_n));
    return dt;
}

StepResult Stepper::heun(const SimState& state, const NonlinearTerms& f0, double dt) {
    const double t1 = state.t + dt;
    const PhysParams& p = state.params;
    const bool sheared = sw_.couette;

    SimState next;
    next.params = p;
    next.t = t1;

    SpectralField pn = state.n;
    SpectralField pw = state.omega;
    pn.axpy(dt, f0.dn);
    pw.axpy(dt, f0.domega);
    pn = linear_propagator(pn, p.kappa, state.t, t1, sheared);
    pw = linear_propagator(pw, p.nu, state.t, t1, sheared);
    pn.time = pw.time = shear_time(t1, sw_);

    NonlinearTerms f1 = eval_(pn, pw, t1, p, sw_);

    SpectralField hn = state.n;
    SpectralField hw = state.omega;
    hn.axpy(0.5 * dt, f0.dn);
    hw.axpy(0.5 * dt, f0.domega);
    next.n = linear_propagator(hn, p.kappa, state.t, t1, sheared);
    next.omega = linear_propagator(hw, p.nu, state.t, t1, sheared);
    next.n.axpy(0.5 * dt, f1.dn);
    next.omega.axpy(0.5 * dt, f1.domega);
    dealias_in_place(next.n);
    dealias_in_place(next.omega);
    next.n.time = next.omega.time = shear_time(t1, sw_);

    StepResult r{std::move(next), true, dt};
    r.finite = r.state.n.all_finite() && r.state.omega.all_finite();
    return r;
}

StepResult Stepper::step(const SimState& state, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step requires dt > 0");
    if (!sw_.nonlinear) {
        SimState next = state;
        next.t = state.t + dt;
        next.n = linear_propagator(state.n, state.params.kappa, state.t, next.t, sw_.couette);
        next.omega = linear_propagator(state.omega, state.params.nu, state.t, next.t, sw_.couette);
        next.n.time = next.omega.time = shear_time(next.t, sw_);
        StepResult r{std::move(next), true, dt};
        r.finite = r.state.n.all_finite() && r.state.omega.all_finite();
        return r;
    }
    NonlinearTerms f0 = eval_(state.n, state.omega, state.t, state.params, sw_);
    return heun(state, f0, dt);
}

StepResult Stepper::advance(const SimState& state, double dt_cap) {
    if (!sw_.nonlinear) return step(state, std::min(control_.dt_max, dt_cap));
    NonlinearTerms f0 = eval_(state.n, state.omega, state.t, state.params, sw_);
    const double dt = std::min(stable_dt(f0, state.params), dt_cap);
    return heun(state, f0, dt);
}

StepResult step(const SimState& state, double dt, const Switches& sw) {
    Stepper stepper(state.n.grid, sw);
    return stepper.step(state, dt);
}

std::string to_string(RunStatus status) {
    switch (status) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup: return "blowup";
    case RunStatus::resolution_exceeded: return "resolution_exceeded";
    case RunStatus::mass_leak: return "mass_leak";
    }
    return "unknown";
}

RunStatus run_status_from_string(const std::string& name) {
    for (RunStatus s : {RunStatus::completed, RunStatus::blowup, RunStatus::resolution_exceeded, RunStatus::mass_leak})
        if (to_string(s) == name) return s;
    throw std::invalid_argument("unknown run status '" + name + "'");
}

double spectral_tail_fraction(const SpectralField& n) {
    const Grid& g = *n.grid;
    const double kc = std::max(1, g.k_cut());
    const double jc = std::max(1, g.j_cut());
    double total = 0.0;
    double tail = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            if ((i == 0 && j == 0) || !g.retained(i, j)) continue;
            const double e = std::norm(n(i, j));
            total += e;
            const double r = std::max(std::abs(g.kz[i]) / kc, std::abs(g.ky_index[j]) / jc);
            if (3.0 * r > 2.0) tail += e;
        }
    return total > 0.0 ? tail / total : 0.0;
}

std::optional<BlowupVerdict> detect_blowup(const SimState& state, DetectorHistory& history,
                                           const DetectorSettings& settings) {
    BlowupVerdict v;
    v.status = RunStatus::blowup;
    v.t_stop = state.t;
    if (!state.n.all_finite() || !state.omega.all_finite()) {
        v.peak_sup = history.peak_sup;
        v.tail_fraction = std::nan("");
        v.trigger = "non_finite";
        return v;
    }
    const std::vector<double> phys = state.n.to_physical();
    const double sup = *std::max_element(phys.begin(), phys.end());
    history.peak_sup = std::max(history.peak_sup, sup);
    v.peak_sup = history.peak_sup;
    v.tail_fraction = spectral_tail_fraction(state.n);
    if (history.initial_sup > 0.0 && sup > settings.blowup_factor * history.initial_sup) {
        v.trigger = "sup_growth";
        return v;
    }
    if (v.tail_fraction > settings.tail_threshold) {
        v.trigger = "spectral_tail";
        return v;
    }
    return std::nullopt;
}

int active_k_max(const SpectralField& f, double rel_tol) {
    const Grid& g = *f.grid;
    std::vector<double> row(g.nx / 2 + 1, 0.0);
    double total = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        double e = 0.0;
        for (int j = 0; j < g.ny; ++j) e += std::norm(f(i, j));
        row[std::abs(g.kz[i])] += e;
        total += e;
    }
    if (total == 0.0) return 0;
    for (int k = static_cast<int>(row.size()) - 1; k > 0; --k)
        if (row[k] > rel_tol * total) return k;
    return 0;
}

double secular_resolution_bound(const Grid& grid, int k_active) {
    if (k_active <= 0) return std::numeric_limits<double>::infinity();
    return grid.eta_max_retained() / (2.0 * k_active);
}

}  // namespace pks
