#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "henon/params.hpp"

using namespace henon;
using doctest::Approx;

TEST_CASE("critical exponent") {
    CHECK(critical_exponent(3, 0.5, 0.0) == Approx(2.0));
    CHECK(critical_exponent(3, 0.5, 1.0) == Approx(3.0));
    CHECK(critical_exponent(3, 1.0, 0.0) == Approx(5.0));
    // increasing in alpha and s
    CHECK(critical_exponent(3, 0.5, 0.2) < critical_exponent(3, 0.5, 0.3));
    CHECK(critical_exponent(3, 0.4, 0.2) < critical_exponent(3, 0.6, 0.2));
}

TEST_CASE("admissibility") {
    CHECK_FALSE(admissible(3, 0.25, 3.0));
    CHECK(admissible(3, 0.25, 1.9));
    CHECK(admissible(3, 0.75, 3.0));
    CHECK_FALSE(admissible(3, 0.5, -1.0001));
    CHECK_FALSE(admissible(1, 0.5, 0.0));  // N = 2s
}

TEST_CASE("params validation") {
    CHECK_THROWS_AS(Params::make(3, 1.2, 0.0), ParamsError);
    CHECK_THROWS_AS(Params::make(3, 0.5, -2.0), ParamsError);
    CHECK_THROWS_AS(Params::make(3, 0.5, 0.0, 0.9), ParamsError);
    CHECK_THROWS_AS(Params::make(3, 0.25, 0.0, 3.5), ParamsError);  // p >= (1+2s)/(1-2s)
    const Params p = Params::make(3, 0.75, 0.5);
    CHECK(p.p == Approx(5.5 / 1.5));
    CHECK(p.decay_rate() == Approx(0.75));
}

TEST_CASE("hardy constant") {
    CHECK(hardy_constant(3, 0.5) == Approx(2.0 / M_PI).epsilon(1e-14));
    CHECK(hardy_constant(2, 0.5) == Approx(0.2284733).epsilon(1e-6));
    CHECK(hardy_constant(3, 0.999999) == Approx(0.25).epsilon(1e-5));
    CHECK(hardy_constant(3, 1.0) == Approx(0.25));
    CHECK_THROWS_AS(hardy_constant(1, 0.5), ParamsError);
    // monotone in s for N <= 3 (decreasing) and N >= 5 (increasing); N = 4 returns to 1 at both ends
    for (int N : {1, 2, 3, 5, 6}) {
        double prev = hardy_constant(N, 0.01);
        for (double s = 0.02; s < 0.995 && N > 2 * s; s += 0.01) {
            const double a = hardy_constant(N, s);
            CHECK((N <= 3 ? a < prev : a > prev));
            prev = a;
        }
    }
    CHECK(hardy_constant(4, 0.5) > 1.0);
    CHECK(hardy_constant(4, 0.999999) == Approx(1.0).epsilon(1e-5));
}

TEST_CASE("power symbol") {
    CHECK(power_symbol(3, 0.5, 1.0) == Approx(hardy_constant(3, 0.5)).epsilon(1e-14));
    CHECK(power_symbol(3, 0.5, 0.5) == Approx(0.5).epsilon(1e-14));
    CHECK(power_symbol(3, 0.5, 1e-9) < 1e-8);
    CHECK_THROWS_AS(power_symbol(3, 0.5, 0.0), ParamsError);
    CHECK_THROWS_AS(power_symbol(3, 0.5, 2.0), ParamsError);
    for (double mu : {0.1, 0.3, 0.7, 0.95}) {
        const double a = power_symbol(4, 0.3, mu), b = power_symbol(4, 0.3, 4 - 0.6 - mu);
        CHECK(a == Approx(b).epsilon(1e-13));
        CHECK(a <= hardy_constant(4, 0.3));
    }
}

TEST_CASE("normalization and kernel constants") {
    CHECK(normalization_constant(1, 0.5) == Approx(1.0 / M_PI).epsilon(1e-14));
    CHECK(sphere_measure(0) == Approx(2.0));
    CHECK(sphere_measure(2) == Approx(4.0 * M_PI));
    for (int N : {1, 2, 3, 5}) {
        for (double s : {0.2, 0.5, 0.9}) {
            CHECK(normalization_constant(N, s) * kernel_singular_coefficient(N, s) ==
                  Approx(normalization_constant(1, s)).epsilon(1e-13));
        }
    }
}

TEST_CASE("gamma identities used by the constants") {
    for (double x = 0.1; x < 50.0; x += 0.37) {
        const double dup = std::lgamma(x) + std::lgamma(x + 0.5) - (0.5 * std::log(M_PI) + (1 - 2 * x) * std::log(2.0) +
                                                                   std::lgamma(2 * x));
        CHECK(std::abs(dup) < 1e-12 * std::max(1.0, std::abs(std::lgamma(2 * x))));
    }
    for (double x = 0.05; x < 1.0; x += 0.1) {
        CHECK(std::tgamma(x) * std::tgamma(1 - x) == Approx(M_PI / std::sin(M_PI * x)).epsilon(1e-12));
    }
}
