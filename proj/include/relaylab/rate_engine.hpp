#pragma once

#include "relaylab/fading.hpp"

#include <memory>
#include <string>

namespace relaylab {

struct OutageResult {
    double rate = 0.0;       ///< nats
    double threshold = 0.0;  ///< decoding threshold gain
    bool multimodal = false;
};

/// Optimal continuum layering for an equivalent-gain law. The support [x0, x1] comes
/// from I_r(x0) = Ps and I_r(x1) = 0 with I_r(x) = (1 - F - x f)/(f x^2).
/// Throws AllocationError when I_r increases somewhere on the support.
PowerAllocation optimal_allocation(const DistributionModel& dist, double ps, std::string name = "opt");

/// Average layered rate ∫ (1 - F(x)) x rho(x)/(1 + x I(x)) dx.
double broadcast_rate(const DistributionModel& dist, const PowerAllocation& alloc);

/// ∫_{x0}^{x1} [2(1 - F)/x + (1 - F) f'/f] dx, the optimum written without I.
double broadcast_rate_closed(const DistributionModel& dist, double ps);
/// Same, reusing an allocation already built by optimal_allocation for this law.
double broadcast_rate_closed(const DistributionModel& dist, const PowerAllocation& optimal);

/// Single-level coding: max over x of (1 - F(x)) ln(1 + x Ps).
OutageResult outage_rate(const DistributionModel& dist, double ps);

/// Rate decodable at equivalent gain s: ∫_{x0}^{min(s, x1)} u rho(u)/(1 + u I(u)) du.
double layered_rate(const PowerAllocation& alloc, double s);

/// Layered rate R(s) tabulated once for fast repeated lookups (Monte Carlo).
class LayeredRateTable {
public:
    explicit LayeredRateTable(const PowerAllocation& alloc);

    double operator()(double s) const;
    /// R(x1), the rate reached once every layer is decodable.
    double saturation() const noexcept { return saturation_; }
    const PowerAllocation& allocation() const noexcept { return alloc_; }

private:
    PowerAllocation alloc_;
    std::shared_ptr<const numerics::ChebyshevTable<1>> table_;
    double saturation_ = 0.0;
};

}  // namespace relaylab
