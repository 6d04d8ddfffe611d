#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relaylab/fading.hpp"
#include "relaylab/oracle.hpp"

#include <cmath>

using namespace relaylab;
using doctest::Approx;

TEST_CASE("philox4x32-10 known answers") {
    using C = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("sample stream is reproducible and unit exponential") {
    const FadingPair a = sample_pair(kDefaultSeed, 0);
    const FadingPair b = sample_pair(kDefaultSeed, 0);
    CHECK(a.s1 == b.s1);
    CHECK(a.s2 == b.s2);
    CHECK(sample_pair(kDefaultSeed + 1, 0).s1 != a.s1);

    SampleConfig sc;
    sc.n_samples = 100000;
    const auto pairs = sample_pairs(sc);
    double m1 = 0.0, m2 = 0.0;
    for (const auto& p : pairs) {
        CHECK_FALSE(p.s1 < 0.0);
        m1 += p.s1;
        m2 += p.s2;
    }
    const double n = static_cast<double>(sc.n_samples);
    CHECK(std::abs(m1 / n - 1.0) < 3.0 / std::sqrt(n));
    CHECK(std::abs(m2 / n - 1.0) < 3.0 / std::sqrt(n));
}

TEST_CASE("identity map is Rayleigh distributed") {
    SampleConfig sc;
    sc.n_samples = 100000;
    const auto emp = empirical_distribution([](const FadingPair& p) { return p.s1; }, sc);
    CHECK(emp.ks_distance(rayleigh_distribution()) < 1.36 / std::sqrt(static_cast<double>(sc.n_samples)));
    const auto both = empirical_distribution([](const FadingPair& p) { return p.s1 + p.s2; }, sc);
    CHECK(both.ks_distance(joint_ub_distribution()) < 0.01);
    const auto best = empirical_distribution([](const FadingPair& p) { return std::max(p.s1, p.s2); }, sc);
    CHECK(best.ks_distance(strongest_distribution()) < 0.01);
}

TEST_CASE("constant map gives a single step") {
    SampleConfig sc;
    sc.n_samples = 1000;
    const auto emp = empirical_distribution([](const FadingPair&) { return 2.0; }, sc);
    CHECK(emp.cdf(1.999) == 0.0);
    CHECK(emp.cdf(2.0) == 1.0);
}

TEST_CASE("results do not depend on the worker count") {
    SampleConfig sc;
    sc.n_samples = 50000;
    auto g = [](const FadingPair& p) { return std::log1p(p.s1 * p.s2); };
    sc.threads = 1;
    const MeanEstimate one = mc_expectation(sc, g);
    for (unsigned t : {2u, 3u, 8u}) {
        sc.threads = t;
        const MeanEstimate many = mc_expectation(sc, g);
        CHECK(many.mean == one.mean);
        CHECK(many.std_error == one.std_error);
    }
}

TEST_CASE("standard error scales like 1/sqrt(n)") {
    auto g = [](const FadingPair& p) { return p.s1; };
    SampleConfig sc;
    double prev = 0.0;
    for (std::uint64_t n : {1000u, 10000u, 100000u}) {
        sc.n_samples = n;
        const MeanEstimate e = mc_expectation(sc, g);
        CHECK(e.std_error == Approx(1.0 / std::sqrt(static_cast<double>(n))).epsilon(0.2));
        if (prev > 0.0) CHECK(prev / e.std_error == Approx(std::sqrt(10.0)).epsilon(0.2));
        prev = e.std_error;
    }
}

TEST_CASE("average rate under a zero-power allocation is zero") {
    SampleConfig sc;
    sc.n_samples = 10000;
    const MeanEstimate e = empirical_avg_rate([](const FadingPair& p) { return p.s1; }, PowerAllocation::zero(1.0), sc);
    CHECK(e.mean == 0.0);
    CHECK(e.std_error == 0.0);
}

TEST_CASE("single-user layered rate matches the closed form on average") {
    SampleConfig sc;
    sc.n_samples = 200000;
    const PowerAllocation su = alloc_single_user_opt(1.0);
    const MeanEstimate e = empirical_avg_rate([](const FadingPair& p) { return p.s1; }, su, sc);
    CHECK(std::abs(e.mean - 0.266652609325656) < 3.0 * e.std_error);
}
