#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "scatran/errors.hpp"

namespace scatran {

/// SSP-RK3 (Shu-Osher) one-step map. State needs +, * by scalar.
/// L must not mutate its argument; any ghost filling belongs inside L.
template <typename State, typename Rhs>
State rk3_step(const State& s, Rhs&& L, double dt) {
    const State s1 = s + dt * L(s);
    const State s2 = 0.75 * s + 0.25 * s1 + (0.25 * dt) * L(s1);
    return (1.0 / 3.0) * s + (2.0 / 3.0) * s2 + (2.0 / 3.0 * dt) * L(s2);
}

/// Adams-Bashforth-2 predictor with variable step support:
/// rho = dt/dt_prev, u* = u + dt ((1 + rho/2) a_n - (rho/2) a_{n-1}).
/// rho = 1 recovers the familiar 3/2, -1/2 coefficients. The first step
/// (no history) is forward Euler: pass rho = 0.
inline double ab2_step(double u, double a_n, double a_nm1, double dt, double rho = 1.0) {
    return u + dt * ((1.0 + 0.5 * rho) * a_n - 0.5 * rho * a_nm1);
}

struct StepControl {
    double cfl = 0.4;
    double dt_cap = std::numeric_limits<double>::infinity();
    double fixed_dt = 0.0; // > 0 forces this step everywhere

    void validate() const {
        if (fixed_dt > 0.0) return;
        if (!(cfl > 0.0) || cfl > 1.0) throw ConfigError("cfl must be in (0, 1]");
        if (!(dt_cap > 0.0)) throw ConfigError("dt_cap must be positive");
    }
};

/// Stable step from the convective limit on the scalar (fine) grid and the
/// diffusive limits of every transported quantity on its own grid:
///   dt = cfl * min( dx_fine/|u|, dz_fine/|w|,
///                   min(dx,dz)_base^2/(4 nu), min(dx,dz)_fine^2/(4 D_scalar) )
/// capped by dt_cap. All-zero velocities leave only the diffusive limits.
inline double select_dt(const StepControl& ctl, double umax, double wmax, double fine_dx_min,
                        double fine_dz_min, double base_d_min, double nu, double d_scalar_max) {
    if (ctl.fixed_dt > 0.0) return ctl.fixed_dt;
    double limit = std::numeric_limits<double>::infinity();
    if (umax > 0.0) limit = std::min(limit, fine_dx_min / umax);
    if (wmax > 0.0) limit = std::min(limit, fine_dz_min / wmax);
    if (nu > 0.0) limit = std::min(limit, base_d_min * base_d_min / (4.0 * nu));
    if (d_scalar_max > 0.0) {
        const double fine_d_min = std::min(fine_dx_min, fine_dz_min);
        limit = std::min(limit, fine_d_min * fine_d_min / (4.0 * d_scalar_max));
    }
    return std::min(ctl.cfl * limit, ctl.dt_cap);
}

} // namespace scatran
