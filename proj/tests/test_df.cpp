#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relaylab/bounds.hpp"
#include "relaylab/df.hpp"
#include "relaylab/oracle.hpp"

#include <cmath>
#include <random>

using namespace relaylab;
using doctest::Approx;

TEST_CASE("pairwise decode-and-forward rate") {
    const PowerAllocation a = alloc_joint_opt(10.0);
    const LayeredRateTable r(a);
    CHECK(df::df_rate_pair({1.2, 0.7}, r, 5.0) == r(1.2));
    CHECK(df::df_rate_pair({0.7, 1.2}, r, 0.0) == r(0.7));
    CHECK(df::df_rate_pair({0.7, 1.2}, r, numerics::kInfinity) == r(1.2));
    CHECK(df::df_rate_pair({0.7, 1.2}, r, 0.01) == Approx(r(0.7) + 0.01));
    CHECK(df::df_rate_pair({0.7, 1.2}, a, 0.01) == Approx(layered_rate(a, 0.7) + 0.01).epsilon(1e-9));
}

TEST_CASE("average rate limits") {
    for (const PowerAllocation& a : {alloc_single_user_opt(10.0), alloc_joint_opt(10.0), alloc_selection_opt(10.0)}) {
        CAPTURE(a.name());
        const double none = df::df_avg_rate(a, 0.0);
        CHECK(none == Approx(broadcast_rate(rayleigh_distribution(), a)).epsilon(1e-8));
        const double all = df::df_avg_rate(a, numerics::kInfinity);
        CHECK(all == Approx(broadcast_rate(strongest_distribution(), a)).epsilon(1e-8));
        double prev = none;
        for (double pr : {0.1, 1.0, 10.0, 100.0}) {
            const double nb = df::df_avg_rate(a, PowerConfig{10.0, pr, CoopMode::narrow_band});
            const double wb = df::df_avg_rate(a, PowerConfig{10.0, pr, CoopMode::wide_band});
            CHECK(wb >= nb);
            CHECK(nb >= prev);
            CHECK(wb <= df_upper_bound(10.0) + 1e-9);
            prev = nb;
        }
    }
    CHECK(df::df_avg_rate(alloc_selection_opt(10.0), numerics::kInfinity) ==
          Approx(df_upper_bound(10.0)).epsilon(1e-7));
}

TEST_CASE("average rate against the Monte Carlo oracle") {
    const PowerAllocation a = alloc_selection_opt(10.0);
    const LayeredRateTable r(a);
    SampleConfig sc;
    for (double c : {0.2, 1.5}) {
        const MeanEstimate mc = mc_expectation(sc, [&](const FadingPair& p) { return df::df_rate_pair(p, r, c); });
        CHECK(std::abs(mc.mean - df::df_avg_rate(a, c)) < 3.0 * mc.std_error);
    }
}

TEST_CASE("wide-band selection allocation approaches the ceiling") {
    const PowerConfig cfg{100.0, 100.0, CoopMode::wide_band};
    CHECK(df::df_avg_rate(alloc_selection_opt(100.0), cfg) >= 0.99 * df_upper_bound(100.0));
}
