#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relaylab/errors.hpp"
#include "relaylab/fading.hpp"
#include "relaylab/numerics.hpp"
#include "relaylab/rate_engine.hpp"

#include <cmath>

using namespace relaylab;
using doctest::Approx;

namespace {

// Rayleigh broadcasting rate at Ps = 1, high-precision reference.
constexpr double kBroadcastRayleighPs1 = 0.266652609325656;

}  // namespace

TEST_CASE("optimal allocation on the Rayleigh law reduces to (1 - s)/s^2") {
    for (double ps : {0.5, 1.0, 10.0, 1000.0}) {
        const PowerAllocation gen = optimal_allocation(rayleigh_distribution(), ps);
        const PowerAllocation su = alloc_single_user_opt(ps);
        CHECK(gen.x0() == Approx(su.x0()).epsilon(1e-10));
        CHECK(gen.x1() == Approx(1.0).epsilon(1e-12));
        for (int i = 1; i < 100; ++i) {
            const double s = su.x0() + (1.0 - su.x0()) * i / 100.0;
            CHECK(gen.interference(s) == Approx(su.interference(s)).epsilon(1e-8));
            CHECK(gen.density(s) == Approx(su.density(s)).epsilon(1e-8));
        }
    }
    CHECK(optimal_allocation(rayleigh_distribution(), 1.0).x0() == Approx(0.618034).epsilon(1e-6));
}

TEST_CASE("optimal allocation on the cooperative law reduces to (1 + x - x^2)/x^3") {
    for (double ps : {1.0, 10.0, 100.0}) {
        const PowerAllocation gen = optimal_allocation(joint_ub_distribution(), ps);
        const PowerAllocation ref = alloc_joint_opt(ps);
        CHECK(gen.x0() == Approx(ref.x0()).epsilon(1e-10));
        CHECK(gen.x1() == Approx(ref.x1()).epsilon(1e-12));
        for (int i = 1; i < 50; ++i) {
            const double s = ref.x0() + (ref.x1() - ref.x0()) * i / 50.0;
            CHECK(gen.interference(s) == Approx(ref.interference(s)).epsilon(1e-8));
        }
    }
}

TEST_CASE("strongest-user layering") {
    const double x1 = 1.21188215096669206826;
    struct Row {
        double ps, x0, rate;
    };
    for (const Row& r : {Row{1.0, 0.790416277831732, 0.420262546547337}, Row{10.0, 0.401375261723891, 1.613250442043549},
                         Row{100.0, 0.182198867171407, 3.537622478369378}, Row{1e4, 0.037486349652389, 8.025698334402010}}) {
        const PowerAllocation a = alloc_selection_opt(r.ps);
        CHECK(a.x1() == Approx(x1).epsilon(1e-12));
        CHECK(a.x0() == Approx(r.x0).epsilon(1e-10));
        CHECK(a.interference(a.x0()) == Approx(r.ps).epsilon(1e-8));
        CHECK(broadcast_rate_closed(strongest_distribution(), r.ps) == Approx(r.rate).epsilon(1e-9));
        CHECK(broadcast_rate(strongest_distribution(), a) == Approx(r.rate).epsilon(1e-8));
        double prev = a.interference(0.0);
        for (int i = 0; i <= 1000; ++i) {
            const double s = 1.5 * i / 1000.0;
            const double cur = a.interference(s);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
        CHECK(numerics::integrate([&](double s) { return a.density(s); }, a.x0(), a.x1()) ==
              Approx(r.ps).epsilon(1e-6));
    }
}

TEST_CASE("support collapses as Ps vanishes") {
    const PowerAllocation a = optimal_allocation(rayleigh_distribution(), 1e-6);
    CHECK(a.x1() - a.x0() < 1e-5);
    CHECK(broadcast_rate_closed(rayleigh_distribution(), 1e-6) < 1e-6);
}

TEST_CASE("broadcast rate: layered form against the closed form") {
    const DistributionModel ray = rayleigh_distribution();
    CHECK(broadcast_rate(ray, alloc_single_user_opt(1.0)) == Approx(kBroadcastRayleighPs1).epsilon(1e-9));
    CHECK(broadcast_rate_closed(ray, 1.0) == Approx(kBroadcastRayleighPs1).epsilon(1e-9));
    CHECK(broadcast_rate(ray, PowerAllocation::zero(1.0)) == 0.0);
    CHECK(broadcast_rate(ray, PowerAllocation::full_interference(1.0)) == 0.0);
    CHECK(broadcast_rate_closed(joint_ub_distribution(), 1.0) == Approx(0.528503573344793).epsilon(1e-9));
    for (const DistributionModel& d : {ray, joint_ub_distribution(), strongest_distribution()}) {
        for (double ps : {1.0, 10.0, 100.0}) {
            const PowerAllocation a = optimal_allocation(d, ps);
            CHECK(std::abs(broadcast_rate(d, a) - broadcast_rate_closed(d, a)) < 1e-6);
        }
    }
}

TEST_CASE("point-mass law is rejected") {
    DistributionModel::Functions fns;
    fns.cdf = [](double u) { return u < 1.0 ? 0.0 : 1.0; };
    fns.pdf = [](double) { return 0.0; };
    fns.pdf_derivative = [](double) { return 0.0; };
    const DistributionModel step("step", fns, {1.0});
    CHECK_THROWS_AS(optimal_allocation(step, 1.0), AllocationError);
}

TEST_CASE("non-monotone residual interference raises AllocationError") {
    // Bimodal mixture of well-separated gains: I_r rises between the modes.
    DistributionModel::Functions fns;
    fns.cdf = [](double u) { return 0.5 * (1.0 - std::exp(-20.0 * u)) + 0.5 * (1.0 - std::exp(-0.05 * u)); };
    fns.survival = [](double u) { return 0.5 * std::exp(-20.0 * u) + 0.5 * std::exp(-0.05 * u); };
    fns.pdf = [](double u) { return 10.0 * std::exp(-20.0 * u) + 0.025 * std::exp(-0.05 * u); };
    fns.pdf_derivative = [](double u) { return -200.0 * std::exp(-20.0 * u) - 0.00125 * std::exp(-0.05 * u); };
    const DistributionModel mix("mixture", fns);
    try {
        optimal_allocation(mix, 100.0);
        FAIL("expected AllocationError");
    } catch (const AllocationError& e) {
        CHECK(e.lo() < e.hi());
    }
}

TEST_CASE("outage rate") {
    struct Row {
        double ps, threshold, rate;
    };
    for (const Row& r : {Row{0.5, 0.843059871766233, 0.151383221934414}, Row{1.0, 0.763222834351897, 0.264380447349634},
                         Row{10.0, 0.472892556538694, 1.087807860153483}, Row{100.0, 0.285365990543293, 2.545110468509940}}) {
        const OutageResult o = outage_rate(rayleigh_distribution(), r.ps);
        CHECK(o.threshold == Approx(r.threshold).epsilon(1e-8));
        CHECK(o.rate == Approx(r.rate).epsilon(1e-12));
        CHECK_FALSE(o.multimodal);
    }
    CHECK(outage_rate(rayleigh_distribution(), 1e-9).rate < 1e-8);

    struct UbRow {
        double ps, threshold, rate;
    };
    for (const UbRow& r : {UbRow{1.0, 1.239977887656550, 0.522774308612822},
                           UbRow{10.0, 0.858158087428317, 1.780194801557462},
                           UbRow{100.0, 0.620352345280817, 3.610617828455646}}) {
        const OutageResult o = outage_rate(joint_ub_distribution(), r.ps);
        CHECK(o.threshold == Approx(r.threshold).epsilon(1e-7));
        CHECK(o.rate == Approx(r.rate).epsilon(1e-12));
    }
}

TEST_CASE("outage rate matches a brute-force grid") {
    const DistributionModel d = joint_ub_distribution();
    double best = 0.0;
    const int n = 1000000;
    for (int i = 1; i <= n; ++i) {
        const double x = 5.0 * i / n;
        best = std::max(best, d.survival(x) * std::log1p(100.0 * x));
    }
    CHECK(std::abs(outage_rate(d, 100.0).rate - best) < 1e-6);
}

TEST_CASE("layering dominates single-level coding") {
    for (const DistributionModel& d : {rayleigh_distribution(), joint_ub_distribution(), strongest_distribution()}) {
        for (double ps : {1.0, 10.0, 100.0}) {
            CHECK(broadcast_rate_closed(d, ps) >= outage_rate(d, ps).rate);
        }
    }
}

TEST_CASE("layered rate") {
    const PowerAllocation su = alloc_single_user_opt(1.0);
    CHECK(layered_rate(su, su.x0()) == 0.0);
    CHECK(layered_rate(su, 0.1) == 0.0);
    CHECK(layered_rate(su, 1.0) == Approx(0.580457638869102).epsilon(1e-10));
    CHECK(layered_rate(su, 7.0) == Approx(layered_rate(su, 1.0)));
    const PowerAllocation joint = alloc_joint_opt(1.0);
    CHECK(layered_rate(joint, numerics::kInfinity) == Approx(layered_rate(joint, 1.6180339887498949)));

    const LayeredRateTable table(joint);
    double prev = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double s = 2.0 * i / 400.0;
        const double r = table(s);
        CHECK(r >= prev - 1e-14);
        CHECK(r == Approx(layered_rate(joint, s)).epsilon(1e-9).scale(1e-10));
        prev = r;
    }
}

TEST_CASE("expected layered rate equals the broadcast rate") {
    struct Pair {
        DistributionModel d;
        PowerAllocation a;
    };
    const Pair pairs[] = {{rayleigh_distribution(), alloc_single_user_opt(10.0)},
                          {joint_ub_distribution(), alloc_joint_opt(10.0)},
                          {strongest_distribution(), alloc_selection_opt(10.0)},
                          {rayleigh_distribution(), alloc_joint_opt(3.0)}};
    for (const Pair& p : pairs) {
        const LayeredRateTable r(p.a);
        const double pts[] = {0.0, p.a.x0(), p.a.x1(), numerics::kInfinity};
        const double expected = numerics::integrate([&](double s) { return p.d.pdf(s) * r(s); }, pts);
        CHECK(expected == Approx(broadcast_rate(p.d, p.a)).epsilon(1e-6));
    }
}
