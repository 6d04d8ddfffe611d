#pragma once

#include "relaylab/fading.hpp"
#include "relaylab/rate_engine.hpp"

namespace relaylab::df {

/// Rate at the destination (user 1) when the helper forwards decoded layers over a
/// link of capacity c_coop: min{R(s1) + c, R(s2)} if s2 > s1, else R(s1).
double df_rate_pair(const FadingPair& pair, const LayeredRateTable& rate, double c_coop);
double df_rate_pair(const FadingPair& pair, const PowerAllocation& alloc, double c_coop);

/// E[df_rate_pair] over Rayleigh pairs by nested quadrature, splitting the inner
/// integral where R(s2) = R(s1) + c.
double df_avg_rate(const PowerAllocation& alloc, const PowerConfig& cfg);
double df_avg_rate(const PowerAllocation& alloc, double c_coop);

}  // namespace relaylab::df
