#include "relaylab/df.hpp"

#include "relaylab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace relaylab::df {

double df_rate_pair(const FadingPair& pair, const LayeredRateTable& rate, double c_coop) {
    if (c_coop < 0.0) throw ConfigError("cooperation capacity must be nonnegative");
    const double own = rate(pair.s1);
    if (!(pair.s2 > pair.s1)) return own;
    return std::min(own + c_coop, rate(pair.s2));
}

double df_rate_pair(const FadingPair& pair, const PowerAllocation& alloc, double c_coop) {
    if (c_coop < 0.0) throw ConfigError("cooperation capacity must be nonnegative");
    const double own = layered_rate(alloc, pair.s1);
    if (!(pair.s2 > pair.s1)) return own;
    return std::min(own + c_coop, layered_rate(alloc, pair.s2));
}

double df_avg_rate(const PowerAllocation& alloc, const PowerConfig& cfg) {
    cfg.validate();
    return df_avg_rate(alloc, cfg.coop_capacity());
}

double df_avg_rate(const PowerAllocation& alloc, double c_coop) {
    if (c_coop < 0.0) throw ConfigError("cooperation capacity must be nonnegative");
    if (alloc.degenerate()) return 0.0;
    const LayeredRateTable rate(alloc);
    const double x0 = alloc.x0();
    const double x1 = alloc.x1();
    const double top = rate.saturation();

    numerics::QuadratureOptions inner;
    inner.abs_tol = 1e-11;
    // ∫_a^∞ e^{-t} R(t) dt; R is flat beyond x1.
    auto tail = [&](double a) {
        const double lo = std::max(a, x0);
        double v = top * std::exp(-std::max(a, x1));
        if (lo < x1) v += numerics::integrate([&](double t) { return std::exp(-t) * rate(t); }, lo, x1, inner);
        return v;
    };
    // Helper gain at which forwarding stops being the bottleneck.
    auto switch_point = [&](double level) {
        return numerics::find_root([&](double s) { return rate(s) - level; }, {x0, x1}, 1e-14 * x1);
    };

    // E over s2 given s1; for s1 >= x1 every layer is already decoded.
    auto conditional = [&](double s1) {
        const double own = rate(s1);
        double v = own * -std::expm1(-s1);
        const double level = own + c_coop;
        if (!(level < top)) return v + tail(s1);
        const double s_star = std::max(s1, switch_point(level));
        v += tail(s1) - tail(s_star) + level * std::exp(-s_star);
        return v;
    };

    std::vector<double> pts{0.0};
    if (x0 > 0.0) pts.push_back(x0);
    pts.push_back(x1);
    numerics::QuadratureOptions outer;
    outer.abs_tol = 1e-10;
    const double body = numerics::integrate([&](double s1) { return std::exp(-s1) * conditional(s1); }, pts, outer);
    return body + top * std::exp(-x1);
}

}  // namespace relaylab::df
