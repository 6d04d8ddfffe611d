#include "relaylab/rate_engine.hpp"

#include "relaylab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace relaylab {

namespace {

constexpr double kScanLo = 1e-6;
constexpr double kScanHi = 1e3;
constexpr int kScanPoints = 400;

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> xs(n);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < n; ++i) xs[i] = std::exp(a + (b - a) * i / (n - 1));
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

// Breakpoints of the law that fall strictly inside (a, b), with both ends.
std::vector<double> split_points(const DistributionModel& dist, double a, double b) {
    std::vector<double> pts{a};
    for (double p : dist.breakpoints())
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    return pts;
}

LayerProfile optimal_profile(const DensityPoint& d, double x) {
    const double fx2 = d.pdf * x * x;
    return {(d.survival - x * d.pdf) / fx2,
            d.survival * (x * d.pdf_derivative + 2.0 * d.pdf) / (fx2 * d.pdf * x)};
}

// First downward sign change of g on the grid restricted to [lo, hi].
bool bracket_first_fall(const std::vector<double>& xs, const std::vector<double>& gs, double& lo, double& hi) {
    int last_positive = -1;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isnan(gs[i])) continue;
        if (gs[i] > 0.0) {
            last_positive = static_cast<int>(i);
        } else if (last_positive >= 0) {
            lo = xs[last_positive];
            hi = xs[i];
            return true;
        } else {
            return false;
        }
    }
    return false;
}

}  // namespace

PowerAllocation optimal_allocation(const DistributionModel& dist, double ps, std::string name) {
    if (!(ps > 0.0)) throw ConfigError("Ps must be positive");
    auto numerator = [&](double x) {
        const DensityPoint d = dist.at(x);
        if (d.survival == 0.0 && d.pdf == 0.0) return std::nan("");
        return d.survival - x * d.pdf;
    };

    const std::vector<double> xs = log_grid(kScanLo, kScanHi, kScanPoints);
    std::vector<double> h1(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) h1[i] = numerator(xs[i]);
    double lo = 0.0, hi = 0.0;
    if (!bracket_first_fall(xs, h1, lo, hi))
        throw AllocationError("optimal_allocation: no zero of the residual interference for " + dist.name(),
                              kScanLo, kScanHi);
    const double x1 = numerics::find_root(numerator, {lo, hi}, 1e-14 * hi);

    auto above_ps = [&](double x) {
        const DensityPoint d = dist.at(x);
        return d.survival - x * d.pdf - ps * d.pdf * x * x;
    };
    std::vector<double> xs0;
    std::vector<double> h0;
    for (double x : log_grid(kScanLo, x1, kScanPoints)) {
        xs0.push_back(x);
        h0.push_back(above_ps(x));
    }
    if (!(h0.front() > 0.0))
        throw AllocationError("optimal_allocation: lower boundary below scan range for " + dist.name(), 0.0,
                              kScanLo);
    if (!bracket_first_fall(xs0, h0, lo, hi))
        throw AllocationError("optimal_allocation: lower boundary not bracketed for " + dist.name(), kScanLo, x1);
    const double x0 = numerics::find_root(above_ps, {lo, hi}, 1e-14 * hi);
    if (!(x0 < x1))
        throw AllocationError("optimal_allocation: empty layering support for " + dist.name(), x0, x1);

    // The construction is only valid where I_r decreases.
    const std::vector<double> probe = log_grid(x0, x1, 256);
    std::vector<double> rho(probe.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < probe.size(); ++i) {
        const DensityPoint d = dist.at(probe[i]);
        rho[i] = optimal_profile(d, probe[i]).density;
        if (!std::isfinite(rho[i]) || !(d.pdf > 0.0))
            throw AllocationError("optimal_allocation: density undefined on the support of " + dist.name(),
                                  probe[std::max<std::size_t>(i, 1) - 1], probe[i]);
        scale = std::max(scale, std::abs(rho[i]));
    }
    for (std::size_t i = 0; i < probe.size(); ++i) {
        if (rho[i] < -1e-9 * scale) {
            std::size_t j = i;
            while (j + 1 < probe.size() && rho[j + 1] < 0.0) ++j;
            throw AllocationError("optimal_allocation: residual interference increases for " + dist.name(),
                                  probe[i == 0 ? 0 : i - 1], probe[std::min(j + 1, probe.size() - 1)]);
        }
    }

    PowerAllocation exact(std::move(name), ps, x0, x1, [dist](double x) {
        return optimal_profile(dist.at(x), x);
    });
    return exact.tabulated(dist.breakpoints(), 1e-10);
}

PowerAllocation alloc_selection_opt(double ps) {
    return optimal_allocation(strongest_distribution(), ps, "sel");
}

double broadcast_rate(const DistributionModel& dist, const PowerAllocation& alloc) {
    if (alloc.degenerate()) return 0.0;
    const auto pts = split_points(dist, alloc.x0(), alloc.x1());
    return numerics::integrate(
        [&](double x) {
            const LayerProfile p = alloc.profile(x);
            if (p.density == 0.0) return 0.0;
            return dist.survival(x) * x * p.density / (1.0 + x * p.interference);
        },
        pts);
}

double broadcast_rate_closed(const DistributionModel& dist, const PowerAllocation& optimal) {
    if (optimal.degenerate()) return 0.0;
    const auto pts = split_points(dist, optimal.x0(), optimal.x1());
    return numerics::integrate(
        [&](double x) {
            const DensityPoint d = dist.at(x);
            return 2.0 * d.survival / x + d.survival * d.pdf_derivative / d.pdf;
        },
        pts);
}

double broadcast_rate_closed(const DistributionModel& dist, double ps) {
    return broadcast_rate_closed(dist, optimal_allocation(dist, ps));
}

OutageResult outage_rate(const DistributionModel& dist, double ps) {
    if (!(ps > 0.0)) throw ConfigError("Ps must be positive");
    const numerics::Maximum m = numerics::maximize_1d(
        [&](double x) { return dist.survival(x) * std::log1p(x * ps); }, {kScanLo, kScanHi}, 1e-12);
    return {m.max, m.argmax, m.multimodal};
}

namespace {

double rate_element(const PowerAllocation& alloc, double u) {
    const LayerProfile p = alloc.profile(u);
    return u * p.density / (1.0 + u * p.interference);
}

}  // namespace

double layered_rate(const PowerAllocation& alloc, double s) {
    if (alloc.degenerate() || s <= alloc.x0()) return 0.0;
    const double top = std::min(s, alloc.x1());
    return numerics::integrate([&](double u) { return rate_element(alloc, u); }, alloc.x0(), top);
}

LayeredRateTable::LayeredRateTable(const PowerAllocation& alloc) : alloc_(alloc) {
    if (alloc.degenerate()) return;
    saturation_ = layered_rate(alloc, alloc.x1());
    using Table = numerics::ChebyshevTable<1>;
    Table::Options opts;
    opts.tol = 1e-11;
    opts.log_scale = alloc.x0() > 0.0;
    table_ = std::make_shared<const Table>(Table::fit(
        [&](double s) { return std::array<double, 1>{layered_rate(alloc_, s)}; }, alloc.x0(), alloc.x1(), {},
        opts));
}

double LayeredRateTable::operator()(double s) const {
    if (!table_ || s <= alloc_.x0()) return 0.0;
    if (s >= alloc_.x1()) return saturation_;
    return (*table_)(s)[0];
}

}  // namespace relaylab
