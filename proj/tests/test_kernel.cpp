#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "henon/kernel.hpp"

using namespace henon;
using doctest::Approx;

namespace {

double n3_closed_form(double s, double t) {
    const double q = 0.5 + s;
    const double minus = 4.0 * std::sinh(0.5 * t) * std::sinh(0.5 * t);
    const double plus = 4.0 * std::cosh(0.5 * t) * std::cosh(0.5 * t);
    return 2.0 * M_PI / (1.0 + 2.0 * s) * (std::pow(minus, -q) - std::pow(plus, -q));
}

}  // namespace

TEST_CASE("N = 1 closed form") {
    const Params p{1, 0.25, 0.0, 2.0};
    CHECK(kernel_value(p, std::log(2.0)) == Approx(2.0055).epsilon(1e-4));
    for (double t : {1e-3, 0.3, 2.0, 15.0}) {
        const double e = std::exp(-t);
        const double closed = std::exp(-t * 0.75) * (std::pow(1 - e, -1.5) + std::pow(1 + e, -1.5));
        CHECK(kernel_value(p, t) == Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("N = 3 agrees with the closed form") {
    for (double s : {0.2, 0.5, 0.75, 0.95}) {
        const Params p{3, s, 0.0, 2.0};
        for (double t : {1e-3, 0.05, 0.7, 3.0, 12.0}) CHECK(kernel_value(p, t) == Approx(n3_closed_form(s, t)).epsilon(1e-10));
    }
}

TEST_CASE("evenness, singularity and tail") {
    const Params p{3, 0.5, 0.0, 2.0};
    for (double t : {0.01, 0.5, 4.0}) CHECK(kernel_value(p, t) == kernel_value(p, -t));
    CHECK_THROWS(kernel_value(p, 0.0));
    CHECK(kernel_value(p, 10.0) / (4.0 * M_PI * std::exp(-20.0)) == Approx(1.0).epsilon(1e-4));
    const Params q{2, 0.3, 0.0, 2.0};
    for (double t : {1e-4, 1e-3, 1e-2}) {
        const double scaled = kernel_value(q, t) * std::pow(t, 1.6);
        CHECK(scaled == Approx(kernel_singular_coefficient(2, 0.3)).epsilon(0.05));
    }
}

TEST_CASE("table invariants") {
    const Params p{2, 0.3, 0.0, 2.0};
    const KernelTable table = kernel_table(p, 0.01, 4000);
    REQUIRE(table.length() == 4000);
    for (std::size_t j = 1; j <= table.length(); ++j) {
        CHECK(table.at(j) > 0.0);
        if (j > 1) CHECK(table.at(j) < table.at(j - 1));
    }
    CHECK(table.tail_coeff == Approx(sphere_measure(1)));
    CHECK(table.sing_coeff == Approx(kernel_singular_coefficient(2, 0.3)).epsilon(1e-5));
    CHECK(table.fit_residual < 1e-3);
}

TEST_CASE("singular fit") {
    const Params p{3, 0.5, 0.0, 2.0};
    const SingularFit fit = fit_singular_coefficient(p, 0.018);
    CHECK(fit.loglog_slope == Approx(-2.0).epsilon(1e-2));
    CHECK(fit.coeff == Approx(M_PI).epsilon(1e-6));
    const Params one{1, 0.25, 0.0, 2.0};
    const LogGrid grid(18.0, 2001);
    const KernelTable table = kernel_table(one, grid);
    for (std::size_t j = 1; j <= table.length(); j += 97) CHECK(table.at(j) == Approx(kernel_value(one, j * table.h)).epsilon(1e-12));
}

TEST_CASE("A from its integral definition") {
    struct Case { int N; double s; };
    for (Case c : {Case{3, 0.5}, Case{3, 0.75}, Case{2, 0.3}, Case{1, 0.25}, Case{4, 0.9}}) {
        const Params p{c.N, c.s, 0.0, 2.0};
        const double a = A_via_integral(p);
        CHECK(std::abs(a / hardy_constant(c.N, c.s) - 1.0) < 1e-6);
    }
    CHECK(A_via_integral(Params{3, 0.999, 0.0, 2.0}) == Approx(0.25).epsilon(4e-3));
    CHECK(A_via_integral(Params{2, 0.5, 0.0, 2.0}) == Approx(0.228473).epsilon(1e-5));
}

TEST_CASE("cache round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "henon_kernel_cache_test";
    std::filesystem::remove_all(dir);
    const Params p{3, 0.6, 0.0, 2.0};
    const LogGrid grid(10.0, 201);
    const KernelTable fresh = cached_kernel_table(p, grid, 1e-12, dir);
    const auto file = kernel_cache_path(dir, p.N, p.s, grid.spacing(), fresh.length(), 1e-12);
    REQUIRE(std::filesystem::exists(file));
    const auto loaded = load_kernel_table(file);
    REQUIRE(loaded.has_value());
    CHECK(loaded->values == fresh.values);
    CHECK(loaded->sing_coeff == fresh.sing_coeff);
    const KernelTable again = cached_kernel_table(p, grid, 1e-12, dir);
    CHECK(again.values == fresh.values);
    std::filesystem::remove_all(dir);
}
