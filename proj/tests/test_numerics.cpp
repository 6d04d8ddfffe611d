#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relaylab/errors.hpp"
#include "relaylab/numerics.hpp"

#include <cmath>
#include <random>

using namespace relaylab;
using namespace relaylab::numerics;
using doctest::Approx;

TEST_CASE("lambert_w0 reference values") {
    CHECK(lambert_w0(0.0) == 0.0);
    CHECK(lambert_w0(std::exp(1.0)) == Approx(1.0).epsilon(1e-14));
    CHECK(lambert_w0(1.0) == Approx(0.567143290409784).epsilon(1e-13));
    CHECK(lambert_w0(-std::exp(-1.0)) == Approx(-1.0).epsilon(1e-7));
    CHECK_THROWS_AS(lambert_w0(-0.4), std::domain_error);
}

TEST_CASE("lambert_w0 inverts w e^w on [-1/e, 10] and large x") {
    const double lo = -std::exp(-1.0);
    for (int i = 0; i <= 2000; ++i) {
        const double x = lo + (10.0 - lo) * i / 2000.0;
        const double w = lambert_w0(x);
        const double back = w * std::exp(w);
        CHECK(std::abs(back - x) <= 1e-10 * std::max(std::abs(x), 1e-3));
    }
    for (double x : {1e3, 1e8, 1e50, 1e300}) {
        const double w = lambert_w0(x);
        CHECK(std::log(w) + w == Approx(std::log(x)).epsilon(1e-14));
    }
}

TEST_CASE("exp_integral_e1 reference values") {
    CHECK(exp_integral_e1(1.0) == Approx(0.219383934395520).epsilon(1e-13));
    CHECK(exp_integral_e1(0.618034) == Approx(0.438272050023148).epsilon(1e-13));
    CHECK(exp_integral_e1(kInfinity) == 0.0);
    CHECK(scaled_exp_integral_e1(1.0) * std::exp(-1.0) == Approx(exp_integral_e1(1.0)).epsilon(1e-14));
    // Asymptotically e^x E1(x) ~ 1/x.
    CHECK(scaled_exp_integral_e1(1e8) == Approx(1.0 / (1e8 + 1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(exp_integral_e1(0.0), std::domain_error);
    CHECK_THROWS_AS(exp_integral_e1(-1.0), std::domain_error);
}

TEST_CASE("exp_integral_e1 agrees with quadrature and its recurrence") {
    for (double x : {0.05, 0.3, 0.99, 1.0, 1.01, 2.5, 7.0, 30.0}) {
        const double q = integrate([](double t) { return std::exp(-t) / t; }, x, kInfinity, 1e-14);
        CHECK(exp_integral_e1(x) == Approx(q).epsilon(1e-10));
    }
    for (double x : {0.1, 1.0, 5.0}) {
        const double tail = integrate([](double t) { return std::exp(-t) / (t * t); }, x, kInfinity, 1e-12);
        CHECK(std::abs(exp_integral_e1(x) - (std::exp(-x) / x - tail)) < 1e-9);
    }
}

TEST_CASE("integrate on finite and semi-infinite ranges") {
    CHECK(integrate([](double x) { return x; }, 0.0, 1.0) == Approx(0.5).epsilon(1e-14));
    CHECK(integrate([](double u) { return std::exp(-u); }, 0.0, kInfinity) == Approx(1.0).epsilon(1e-12));
    CHECK(integrate([](double u) { return u * std::exp(-u) * std::log1p(u); }, 0.0, kInfinity) ==
          Approx(1.0).epsilon(1e-10));
    CHECK(integrate([](double x) { return x; }, 1.0, 0.0) == Approx(-0.5));
    // Integrable endpoint singularity.
    CHECK(integrate([](double x) { return std::log(x); }, 0.0, 1.0) == Approx(-1.0).epsilon(1e-9));
    // Breakpoints at a kink.
    const double pts[] = {-1.0, 0.0, 2.0};
    CHECK(integrate([](double x) { return std::abs(x); }, pts) == Approx(2.5).epsilon(1e-14));
    const double tail_pts[] = {0.0, 1.0, kInfinity};
    CHECK(integrate([](double u) { return std::exp(-u); }, tail_pts) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrate reports non-convergence with a partial estimate") {
    QuadratureOptions opts;
    opts.abs_tol = 1e-12;
    opts.max_intervals = 5;
    try {
        integrate([](double x) { return std::sin(200.0 * x); }, 0.0, 10.0, opts);
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(std::isfinite(e.partial()));
        CHECK(e.error_estimate() > opts.abs_tol);
    }
}

TEST_CASE("integrate is linear on random polynomials") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        double p[5], q[5];
        for (int i = 0; i < 5; ++i) {
            p[i] = coef(rng);
            q[i] = coef(rng);
        }
        const double alpha = coef(rng), beta = coef(rng);
        auto poly = [](const double* c, double x) {
            return c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4])));
        };
        const double fp = integrate([&](double x) { return poly(p, x); }, -1.0, 3.0);
        const double fq = integrate([&](double x) { return poly(q, x); }, -1.0, 3.0);
        const double both =
            integrate([&](double x) { return alpha * poly(p, x) + beta * poly(q, x); }, -1.0, 3.0);
        CHECK(std::abs(both - (alpha * fp + beta * fq)) <= 2.0 * kInnerTol);
    }
}

TEST_CASE("find_root") {
    CHECK(find_root([](double x) { return x * x - 2.0; }, {1.0, 2.0}, 1e-12) ==
          Approx(std::sqrt(2.0)).epsilon(1e-11));
    CHECK(find_root([](double x) { return 1.0 + x - x * x; }, {1.0, 2.0}, 1e-12) ==
          Approx(1.6180339887498949).epsilon(1e-11));
    CHECK(find_root([](double s) { return s * s * s + s * s - s - 1.0; }, {0.5, 2.0}, 1e-12) ==
          Approx(1.0).epsilon(1e-11));
    CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, {-1.0, 1.0}, 1e-12), BracketError);
}

TEST_CASE("find_root brackets the sign change within tol") {
    const double tol = 1e-6;
    for (double shift : {0.1, 0.37, 1.9, 3.3}) {
        auto f = [&](double x) { return std::atan(x - shift) + 0.1 * (x - shift); };
        const double r = find_root(f, {0.0, 4.0}, tol);
        CHECK(f(r - tol) * f(r + tol) <= 0.0);
    }
}

TEST_CASE("maximize_1d") {
    const Maximum quad = maximize_1d([](double x) { return -(x - 1.0) * (x - 1.0); }, {0.0, 2.0}, 1e-10);
    CHECK(quad.argmax == Approx(1.0).epsilon(1e-8));
    CHECK(quad.max == Approx(0.0));
    CHECK_FALSE(quad.multimodal);

    const Maximum outage =
        maximize_1d([](double u) { return std::exp(-u) * std::log1p(u); }, {1e-6, 1e3}, 1e-12);
    CHECK(outage.argmax == Approx(0.763222834351897).epsilon(1e-9));

    const Maximum flat = maximize_1d([](double) { return 3.0; }, {0.0, 1.0}, 1e-8);
    CHECK(flat.plateau);
    CHECK(flat.max == 3.0);

    const Maximum two = maximize_1d(
        [](double x) { return std::exp(-50.0 * (x - 0.2) * (x - 0.2)) + 1.1 * std::exp(-50.0 * (x - 0.8) * (x - 0.8)); },
        {0.0, 1.0}, 1e-10);
    CHECK(two.multimodal);
    CHECK(two.argmax == Approx(0.8).epsilon(1e-3));

    const Maximum edge = maximize_1d([](double x) { return -x; }, {0.5, 2.0}, 1e-10);
    CHECK(edge.argmax == Approx(0.5));
    CHECK_FALSE(edge.multimodal);
}

TEST_CASE("ChebyshevTable reproduces a smooth vector function") {
    auto f = [](double x) { return std::array<double, 2>{std::exp(-x) * std::log1p(x), 1.0 / (x * x)}; };
    const double breaks[] = {1.0};
    const auto table = ChebyshevTable<2>::fit(f, 1e-3, 50.0, breaks, {});
    for (int i = 0; i <= 997; ++i) {
        const double x = 1e-3 * std::pow(5e4, i / 997.0);
        const auto got = table(x);
        const auto want = f(x);
        CHECK(got[0] == Approx(want[0]).epsilon(1e-9).scale(1e-12));
        CHECK(got[1] == Approx(want[1]).epsilon(1e-9));
    }
}
