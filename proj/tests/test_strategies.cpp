#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relaylab/af.hpp"
#include "relaylab/bounds.hpp"
#include "relaylab/errors.hpp"
#include "relaylab/strategies.hpp"

#include <cmath>
#include <map>
#include <random>

using namespace relaylab;
using doctest::Approx;

TEST_CASE("strategy names") {
    const StrategySpec a = parse_strategy("af:naive:outage");
    CHECK(a.kind == StrategyKind::af_naive);
    CHECK(a.outage);
    CHECK(!a.rte);
    CHECK(a.name == "af:naive:outage");
    const StrategySpec b = parse_strategy("cf:multisession+rte");
    CHECK(b.family == Family::cf);
    CHECK(b.rte);
    CHECK(b.default_alloc() == "joint");
    CHECK(parse_strategy("df").default_alloc() == "sel");
    CHECK(parse_strategy("bound:broadcast_lb").fixed_alloc());

    CHECK_THROWS_AS(parse_strategy("af:bogus"), ConfigError);
    CHECK_THROWS_AS(parse_strategy("af:separate:outage"), ConfigError);
    CHECK_THROWS_AS(parse_strategy("bound:broadcast_ub+rte"), ConfigError);
    CHECK_THROWS_AS(parse_strategy("df+rte"), ConfigError);
    CHECK_THROWS_AS(parse_strategy("af:naive:outage+rte"), ConfigError);

    for (const std::string& n : registered_strategies()) CHECK(parse_strategy(n).name == n);

    const auto group = expand_strategies({"bounds", "af:naive"});
    REQUIRE(group.size() == 5);
    CHECK(group[0].name == "bound:outage_lb");
    CHECK(group[3].name == "bound:broadcast_ub");
    CHECK(group[4].name == "af:naive");
}

TEST_CASE("role-swapped gain") {
    const PowerConfig cfg{10.0, 10.0, CoopMode::narrow_band};
    const GainMap naive = [&](const FadingPair& p) { return af::naive_gain(p, cfg); };
    CHECK(rte_gain(naive, {2.0, 1.0}) == Approx(1.645161290322581).epsilon(1e-14));
    std::mt19937_64 rng(5);
    std::exponential_distribution<double> ex(1.0);
    for (int i = 0; i < 200; ++i) {
        const FadingPair p{ex(rng), ex(rng)};
        CHECK(rte_gain(naive, p) <= naive(p));
        CHECK(rte_gain(naive, {p.s1, p.s1}) == naive({p.s1, p.s1}));
    }
}

TEST_CASE("allocations by name") {
    const PowerConfig cfg{10.0, 2.0, CoopMode::narrow_band};
    for (const char* n : {"su", "joint", "sel", "naf", "nwz"}) CHECK(make_allocation(n, cfg).name() == n);
    CHECK_THROWS_AS(make_allocation("bogus", cfg), ConfigError);
}

TEST_CASE("point evaluations") {
    const RatePoint lb = evaluate(parse_strategy("bound:broadcast_lb"), PowerConfig{1.0, 0.0, CoopMode::narrow_band});
    CHECK(lb.rate == Approx(0.266652609325656).epsilon(1e-12));
    CHECK(lb.alloc == "su");
    CHECK(!lb.std_error);

    const RatePoint af0 = evaluate(parse_strategy("af:naive"), PowerConfig{10.0, 0.0, CoopMode::narrow_band});
    CHECK(af0.rate == Approx(broadcast_lb(10.0)).epsilon(1e-8));

    const RatePoint out = evaluate(parse_strategy("cf:naive_nb:outage"), PowerConfig{10.0, 10.0, CoopMode::wide_band});
    CHECK(out.mode == CoopMode::narrow_band);
    REQUIRE(out.threshold);
    CHECK(*out.threshold > 0.0);
    CHECK(out.alloc == "none");

    EvalOptions opts;
    opts.sampling.n_samples = 20000;
    const RatePoint ms = evaluate(parse_strategy("af:multisession"), PowerConfig{10.0, 10.0, CoopMode::narrow_band}, opts);
    CHECK(ms.mode == CoopMode::wide_band);
    CHECK(ms.warnings.size() == 1);
    CHECK(ms.n_samples == 20000u);
    CHECK(ms.seed == kDefaultSeed);

    opts.alloc = "opt";
    CHECK_THROWS_AS(evaluate(parse_strategy("df"), PowerConfig{10.0, 10.0, CoopMode::narrow_band}, opts), ConfigError);
    CHECK_THROWS_AS(evaluate(parse_strategy("df"), PowerConfig{-1.0, 10.0, CoopMode::narrow_band}), ConfigError);
    opts.alloc = "joint";
    const RatePoint fixed = evaluate(parse_strategy("bound:df_ub"), PowerConfig{10.0, 10.0, CoopMode::narrow_band}, opts);
    CHECK(fixed.alloc == "sel");
    CHECK(fixed.warnings.size() == 1);

    // A named allocation on a closed-form law never beats the law's own optimum.
    const PowerConfig cfg{10.0, 2.5, CoopMode::narrow_band};
    const double best = evaluate(parse_strategy("af:naive"), cfg).rate;
    for (const char* n : {"su", "joint", "sel", "nwz"}) {
        opts.alloc = n;
        CHECK(evaluate(parse_strategy("af:naive"), cfg, opts).rate <= best + 1e-9);
    }
}

TEST_CASE("registry is closed and ordered") {
    const PowerConfig cfg{10.0, 10.0, CoopMode::narrow_band};
    EvalOptions opts;
    opts.sampling.n_samples = 20000;
    const double lo = outage_lb(10.0), hi = broadcast_ub(10.0);
    std::map<std::string, RatePoint> base;
    for (const std::string& n : registered_strategies()) {
        CAPTURE(n);
        const StrategySpec spec = parse_strategy(n);
        RatePoint p;
        REQUIRE_NOTHROW(p = evaluate(spec, cfg, opts));
        CHECK(p.rate >= 0.0);
        base[n] = p;
        if (spec.family == Family::bound || spec.outage) continue;
        const double slack = 3.0 * p.std_error.value_or(0.0);
        CHECK(p.rate >= lo - slack);
        CHECK(p.rate <= hi + slack);
        if (supports_rte(spec.kind)) {
            const RatePoint r = evaluate(parse_strategy(n + "+rte"), cfg, opts);
            CHECK(r.rate <= p.rate + 3.0 * std::hypot(r.std_error.value_or(0.0), p.std_error.value_or(0.0)));
        }
    }
}
