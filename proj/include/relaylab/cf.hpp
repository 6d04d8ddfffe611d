#pragma once

#include "relaylab/af.hpp"
#include "relaylab/fading.hpp"
#include "relaylab/oracle.hpp"
#include "relaylab/rate_engine.hpp"

#include <vector>

namespace relaylab::cf {

/// SNR of the cooperation link as seen by the compressor: Pr (narrow band) or e^Pr - 1 (wide band).
double link_snr(const PowerConfig& cfg);

/// Wyner-Ziv compression noise for the helper's description, decoded with the
/// destination's own observation as side information.
double naive_sigma2(double s_helper, double s_dest, const PowerConfig& cfg);
/// User 1 is the destination, user 2 the helper.
double naive_sigma2(const FadingPair& pair, const PowerConfig& cfg);

/// s_dest + s_helper/(1 + sigma^2) with user 1 as the destination.
double naive_gain(const FadingPair& pair, const PowerConfig& cfg);

/// Closed-form law of naive_gain (E1 terms, branch point at link_snr/Ps); pdf and
/// pdf' are analytic. Pr = 0 gives the single-user law.
DistributionModel naive_distribution(const PowerConfig& cfg);
/// The same cdf as a single quadrature over the destination gain (slow, for checks).
double naive_cdf_quadrature(double u, const PowerConfig& cfg);

struct NaiveRates {
    OutageResult outage;
    double broadcast = 0.0;
    PowerAllocation alloc;  ///< optimal layering for the naive law
};
NaiveRates naive_rates(const PowerConfig& cfg);

/// Compression after removing the common layer, decoded at the stronger user:
/// s_max + s_min c(1 + s_max I)/((1 + c)(1 + s_max I) + s_min I), I = I(s_min).
double sep_gain(const FadingPair& pair, const PowerAllocation& alloc, const PowerConfig& cfg);

/// Compression quality after k refinement sessions.
struct CompressionState {
    double sigma2_1 = numerics::kInfinity;  ///< noise of user 1's description (heard by user 2)
    double sigma2_2 = numerics::kInfinity;  ///< noise of user 2's description (heard by user 1)
    int session = 0;
    double common = 0.0;  ///< s^{(k)}: gain below which both users have decoded
    double gain_1 = 0.0;  ///< user 1's equivalent gain s1 + s2/(1 + sigma2_2)
    double gain_2 = 0.0;  ///< user 2's equivalent gain s2 + s1/(1 + sigma2_1)

    /// Before any cooperation: no descriptions, common layer at min(s1, s2).
    static CompressionState initial(const FadingPair& pair);
};

/// One refinement session with link SNRs delta1 (user 1 -> 2) and delta2 (user 2 -> 1).
/// Residual interference is taken at the previous common layer.
CompressionState multisession_step(const CompressionState& state, const FadingPair& pair,
                                   const PowerAllocation& alloc, double delta1, double delta2);

struct SessionRecord {
    double s_a = 0.0;  ///< stronger user's gain
    double s_b = 0.0;  ///< weaker user's gain
    double rate_a = 0.0;
    double rate_b = 0.0;
};

/// Runs the schedule (per-user session powers, converted to link SNRs by the
/// cooperation mode) and records the gains and point rates ln(1 + s Ps) after each session.
std::vector<SessionRecord> multisession_run(const FadingPair& pair, const PowerAllocation& alloc,
                                            const SessionSchedule& schedule, const PowerConfig& cfg);

/// Destination's (user 1's) gain after the full schedule: s_a when user 1 is the stronger, else s_b.
double multisession_gain(const FadingPair& pair, const PowerAllocation& alloc, const SessionSchedule& schedule,
                         const PowerConfig& cfg);

/// E[R(destination gain after one full-power session)] by Monte Carlo; equals sep_gain
/// whenever user 1 is the stronger.
MeanEstimate sep_rate(const PowerAllocation& alloc, const PowerConfig& cfg, const SampleConfig& sc);
/// E[R(destination gain after the schedule)] by Monte Carlo (wide band only).
MeanEstimate multisession_avg_rate(const PowerAllocation& alloc, const SessionSchedule& schedule,
                                   const PowerConfig& cfg, const SampleConfig& sc);

}  // namespace relaylab::cf
