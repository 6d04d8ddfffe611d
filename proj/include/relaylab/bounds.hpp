#pragma once

#include "relaylab/fading.hpp"

namespace relaylab {

/// Optimal single-level threshold on a Rayleigh link: (Ps - W(Ps))/(W(Ps) Ps).
double outage_lb_threshold(double ps);
/// Single-user outage rate e^{-u*} ln(1 + u* Ps).
double outage_lb(double ps);
/// Single-user broadcasting rate in closed form (E1 terms).
double broadcast_lb(double ps);

/// Outage rate of two fully cooperating receivers (gain law of s1 + s2).
double outage_ub(double ps);
/// Lower layering boundary of the joint upper bound: (1 + s - s^2)/s^3 = Ps.
double broadcast_ub_lower_boundary(double ps);
/// Broadcasting rate of two fully cooperating receivers in closed form.
double broadcast_ub(double ps);

/// Closed-form ergodic capacity with m in {1, 2} optimally cooperating receivers.
double ergodic_capacity(int m, double ps);
/// The same expectation evaluated by quadrature over the Gamma(m) gain law.
double ergodic_capacity_integral(int m, double ps);

/// min{C_erg(1) + C_coop, C_erg(2)} with C_coop from the config's cooperation mode.
double cut_set(const PowerConfig& cfg);

/// Broadcasting rate of the strongest of the two users (decode-and-forward ceiling).
double df_upper_bound(double ps);

}  // namespace relaylab
