#pragma once

#include "pks/multipliers.hpp"

namespace pks {

/// Physical parameters. kappa = epsilon * nu with 0 < kappa <= nu <= 1.
struct PhysParams {
    double kappa = 1.0;
    double nu = 1.0;
    double epsilon = 1.0;
    double delta = kDeltaMax;
    int s = 5;
    double mass = 0.0;

    /// Fills epsilon from kappa / nu.
    static PhysParams from_kappa_nu(double kappa, double nu, double mass = 0.0, int s = 5);

    /// Throws std::invalid_argument naming the violated relation.
    void validate() const;

    MultiplierSpec cell_multiplier() const { return {kappa, kappa, delta, s}; }
    MultiplierSpec fluid_multiplier() const { return {nu, kappa, delta, s}; }
};

/// Model switches used to isolate parts of the dynamics.
struct Switches {
    bool couette = true;        // background shear (y, 0); off => symbols frozen at t = 0
    bool chemotaxis = true;     // kappa div(N grad C) in the cell equation
    bool fluid_forcing = true;  // kappa curl(N grad C) in the vorticity equation
    bool nonlinear = true;      // off => pure linear propagation (exact when U == 0 and chemotaxis is off)
};

}  // namespace pks
