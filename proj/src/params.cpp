#include "pks/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pks {

PhysParams PhysParams::from_kappa_nu(double kappa, double nu, double mass, int s) {
    PhysParams p;
    p.kappa = kappa;
    p.nu = nu;
    p.epsilon = kappa / nu;
    p.mass = mass;
    p.s = s;
    return p;
}

void PhysParams::validate() const {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0 (got " + std::to_string(kappa) + ")");
    if (!(kappa <= nu))
        throw std::invalid_argument("regime 0 < kappa <= nu <= 1 violated: kappa = " + std::to_string(kappa) +
                                    " > nu = " + std::to_string(nu));
    if (!(nu <= 1.0)) throw std::invalid_argument("nu must be <= 1 (got " + std::to_string(nu) + ")");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1] (got " + std::to_string(epsilon) + ")");
    if (std::abs(kappa - epsilon * nu) > 1e-12 * kappa)
        throw std::invalid_argument("kappa must equal epsilon * nu (kappa = " + std::to_string(kappa) +
                                    ", epsilon * nu = " + std::to_string(epsilon * nu) + ")");
    if (!(delta > 0.0 && delta <= kDeltaMax * (1.0 + 1e-12)))
        throw std::invalid_argument("delta must lie in (0, 1/(16 pi^2)] (got " + std::to_string(delta) + ")");
    if (s < 0) throw std::invalid_argument("s must be >= 0");
    if (!(mass >= 0.0)) throw std::invalid_argument("mass must be >= 0");
}

}  // namespace pks
