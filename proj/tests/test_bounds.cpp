#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relaylab/bounds.hpp"
#include "relaylab/fading.hpp"
#include "relaylab/rate_engine.hpp"

#include <cmath>

using namespace relaylab;
using doctest::Approx;

TEST_CASE("single-user bounds") {
    CHECK(outage_lb_threshold(1.0) == Approx(0.763222834351897).epsilon(1e-12));
    CHECK(outage_lb(1.0) == Approx(0.264380447349634).epsilon(1e-12));
    CHECK(outage_lb(1e-9) < 1e-8);
    CHECK(broadcast_lb(1.0) == Approx(0.266652609325656).epsilon(1e-12));
    CHECK(broadcast_lb(10.0) == Approx(1.134834519241385).epsilon(1e-12));
    CHECK(broadcast_lb(100.0) == Approx(2.756368896338990).epsilon(1e-12));
    CHECK(broadcast_lb(1e-9) < 1e-8);
    for (double ps : {0.5, 1.0, 10.0, 100.0, 1e4}) {
        CHECK(outage_lb(ps) == Approx(outage_rate(rayleigh_distribution(), ps).rate).epsilon(1e-8));
        CHECK(std::abs(broadcast_lb(ps) - broadcast_rate_closed(rayleigh_distribution(), ps)) < 1e-6);
    }
}

TEST_CASE("cooperative upper bounds") {
    CHECK(broadcast_ub_lower_boundary(1.0) == Approx(1.0).epsilon(1e-13));
    CHECK(broadcast_ub(1.0) == Approx(0.528503573344793).epsilon(1e-12));
    CHECK(broadcast_ub(10.0) == Approx(1.852937884343032).epsilon(1e-12));
    CHECK(broadcast_ub(100.0) == Approx(3.842759799721612).epsilon(1e-12));
    CHECK(outage_ub(1.0) == Approx(0.522774308612822).epsilon(1e-12));
    CHECK(outage_ub(1e-9) < 1e-8);
    CHECK(broadcast_ub_lower_boundary(1e8) < 0.003);
    CHECK(broadcast_ub(1e8) > broadcast_ub(1e6));
    for (double ps : {1.0, 10.0, 100.0}) {
        CHECK(std::abs(broadcast_ub(ps) - broadcast_rate_closed(joint_ub_distribution(), ps)) < 1e-6);
    }
}

TEST_CASE("ergodic capacities") {
    CHECK(ergodic_capacity(2, 1.0) == 1.0);
    CHECK(ergodic_capacity(1, 1.0) == Approx(0.596347362323194).epsilon(1e-13));
    for (double ps : {0.1, 1.0, 10.0, 100.0, 1e4}) {
        for (int m : {1, 2}) {
            CHECK(std::abs(ergodic_capacity(m, ps) - ergodic_capacity_integral(m, ps)) < 1e-6);
        }
    }
    CHECK(std::abs(ergodic_capacity_integral(2, 1.0) - 1.0) < 1e-9);
}

TEST_CASE("cut-set bound") {
    CHECK(cut_set({1.0, 1.0, CoopMode::narrow_band}) == 1.0);
    CHECK(cut_set({1.0, 0.0, CoopMode::narrow_band}) == Approx(ergodic_capacity(1, 1.0)));
    CHECK(cut_set({1.0, 1e12, CoopMode::wide_band}) == Approx(ergodic_capacity(2, 1.0)));
    CHECK(cut_set({10.0, 0.1, CoopMode::wide_band}) >= cut_set({10.0, 0.1, CoopMode::narrow_band}));
    double prev = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double cur = cut_set({10.0, 0.05 * i, CoopMode::narrow_band});
        CHECK(cur >= prev);
        prev = cur;
    }
    prev = 0.0;
    for (int i = -10; i <= 40; ++i) {
        const double cur = cut_set({db_to_linear(i), 0.5, CoopMode::wide_band});
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("bound ordering") {
    for (double ps : {1.0, 10.0, 100.0}) {
        for (double rel : {0.25, 1.0}) {
            CAPTURE(ps);
            CAPTURE(rel);
            const double olb = outage_lb(ps), blb = broadcast_lb(ps);
            const double oub = outage_ub(ps), bub = broadcast_ub(ps);
            CHECK(olb <= blb);
            CHECK(blb <= bub);
            CHECK(olb <= oub);
            CHECK(oub <= bub);
            CHECK(bub <= ergodic_capacity(2, ps));
            CHECK(blb <= df_upper_bound(ps));
            CHECK(df_upper_bound(ps) <= bub);
            CHECK(cut_set({ps, rel * ps, CoopMode::narrow_band}) >= ergodic_capacity(1, ps));
        }
    }
}
