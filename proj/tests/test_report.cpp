#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relaylab/errors.hpp"
#include "relaylab/fading.hpp"
#include "relaylab/report.hpp"
#include "relaylab/validation.hpp"

#include <cmath>
#include <limits>

using namespace relaylab;
using doctest::Approx;

TEST_CASE("csv header") {
    CHECK(kCsvHeader == "strategy,alloc,ps_db,pr_db,coop_mode,rate,units,stderr,n_samples,seed,warnings");
}

TEST_CASE("units") {
    CHECK(parse_units("nats") == Units::nats);
    CHECK(parse_units("bits") == Units::bits);
    CHECK_THROWS_AS(parse_units("dB"), ConfigError);
    CHECK(convert_rate(std::log(2.0), Units::bits) == Approx(1.0).epsilon(1e-15));
    CHECK(convert_rate(0.7, Units::nats) == 0.7);
}

TEST_CASE("csv rows") {
    RatePoint p;
    p.strategy = "af:naive";
    p.alloc = "naf";
    p.ps = 10.0;
    p.pr = 10.0;
    p.mode = CoopMode::narrow_band;
    p.rate = 1.0;
    CHECK(csv_row(p, Units::nats) == "af:naive,naf,10,10,narrow_band,1,nats,,,,");

    p.std_error = 0.001;
    p.n_samples = 1000;
    p.seed = 7;
    p.warnings = {"a, b", "c"};
    CHECK(csv_row(p, Units::nats) == "af:naive,naf,10,10,narrow_band,1,nats,0.001,1000,7,\"a, b;c\"");

    p.warnings = {"say \"hi\""};
    CHECK(csv_row(p, Units::nats).ends_with(",\"say \"\"hi\"\"\""));

    p.rate = std::numeric_limits<double>::quiet_NaN();
    p.warnings.clear();
    CHECK(csv_row(p, Units::bits).find(",nan,bits,") != std::string::npos);
}

TEST_CASE("formatting and grids") {
    CHECK(format_real(0.26665260932565754) == "0.266652609");
    CHECK(format_real(1e-12) == "1e-12");
    const auto g = db_grid(0.0, 40.0, 2.0);
    REQUIRE(g.size() == 21);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 40.0);
    CHECK(db_grid(0.0, 1.0, 0.1).size() == 11);
    CHECK(db_grid(5.0, 5.0, 1.0).size() == 1);
    CHECK_THROWS_AS(db_grid(0.0, 1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(db_grid(2.0, 1.0, 1.0), ConfigError);
}

TEST_CASE("dB round trip") {
    for (double db : {-30.0, -6.0, 0.0, 3.0, 17.5, 40.0}) {
        const double lin = db_to_linear(db);
        CHECK(linear_to_db(lin) == Approx(db).epsilon(1e-13));
        CHECK(format_real(10.0 * std::log10(lin)) == format_real(db));
    }
}

TEST_CASE("fast validation passes") {
    ValidationOptions o;
    o.level = ValidationLevel::fast;
    const ValidationReport r = run_validation(o);
    for (const CheckResult& c : r.checks) {
        INFO(c.suite << ": " << c.name << " value " << c.value << " limit " << c.limit << " " << c.detail);
        CHECK(c.passed);
    }
    REQUIRE(r.adjudications.size() == 2);
    CHECK(r.adjudications[0].verdict() == "two_sided");
    CHECK(r.adjudications[1].verdict() == "squared");
    CHECK(r.text().find("passed form = two_sided") != std::string::npos);
    CHECK(r.passed());
}

TEST_CASE("adjudication verdicts") {
    Adjudication a;
    a.candidates = {"x", "y"};
    a.passed = {false, false};
    CHECK(!a.decided());
    CHECK(a.verdict() == "none");
    a.passed = {true, true};
    CHECK(a.verdict() == "x, y");
}
