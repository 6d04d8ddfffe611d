#include "relaylab/bounds.hpp"

#include "relaylab/errors.hpp"
#include "relaylab/rate_engine.hpp"

#include <cmath>
#include <string>

namespace relaylab {

namespace {

void require_power(double ps) {
    if (!(ps > 0.0)) throw ConfigError("Ps must be positive");
}

double su_lower_boundary(double ps) { return 2.0 / (1.0 + std::sqrt(1.0 + 4.0 * ps)); }

double ub_primitive(double s) {
    return (s - 1.0) * std::exp(-s) - 3.0 * numerics::exp_integral_e1(s);
}

}  // namespace

double outage_lb_threshold(double ps) {
    require_power(ps);
    const double w = numerics::lambert_w0(ps);
    return (ps - w) / (w * ps);
}

double outage_lb(double ps) {
    const double u = outage_lb_threshold(ps);
    return std::exp(-u) * std::log1p(u * ps);
}

double broadcast_lb(double ps) {
    require_power(ps);
    const double s0 = su_lower_boundary(ps);
    using numerics::exp_integral_e1;
    return std::exp(-1.0) - std::exp(-s0) + 2.0 * exp_integral_e1(s0) - 2.0 * exp_integral_e1(1.0);
}

double outage_ub(double ps) { return outage_rate(joint_ub_distribution(), ps).rate; }

double broadcast_ub_lower_boundary(double ps) { return alloc_joint_opt(ps).x0(); }

double broadcast_ub(double ps) {
    const PowerAllocation alloc = alloc_joint_opt(ps);
    return ub_primitive(alloc.x1()) - ub_primitive(alloc.x0());
}

double ergodic_capacity(int m, double ps) {
    require_power(ps);
    const double c1 = numerics::scaled_exp_integral_e1(1.0 / ps);
    if (m == 1) return c1;
    if (m == 2) return 1.0 + c1 - c1 / ps;
    throw ConfigError("ergodic_capacity supports m = 1 or 2, got " + std::to_string(m));
}

double ergodic_capacity_integral(int m, double ps) {
    require_power(ps);
    if (m != 1 && m != 2) throw ConfigError("ergodic_capacity supports m = 1 or 2, got " + std::to_string(m));
    const double pts[] = {0.0, 1.0, 10.0, numerics::kInfinity};
    return numerics::integrate(
        [&](double u) { return (m == 2 ? u : 1.0) * std::exp(-u) * std::log1p(ps * u); }, pts,
        {1e-12, 0.0, 2000});
}

double cut_set(const PowerConfig& cfg) {
    cfg.validate();
    return std::min(ergodic_capacity(1, cfg.ps) + cfg.coop_capacity(), ergodic_capacity(2, cfg.ps));
}

double df_upper_bound(double ps) { return broadcast_rate_closed(strongest_distribution(), ps); }

}  // namespace relaylab
