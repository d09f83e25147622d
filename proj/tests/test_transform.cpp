#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "henon/transform.hpp"

using namespace henon;
using doctest::Approx;

namespace {

const Params kSech = Params::make(3, 0.5, 0.0);

Profile bubble(const LogGrid& g) {
    return sample_profile(kSech, g, Variable::Radial, [](double r) { return 2.0 / (1.0 + r * r); });
}

}  // namespace

TEST_CASE("bubble maps to sech") {
    const LogGrid g(18.0, 2001);
    const Profile log = to_log_profile(bubble(g));
    CHECK(log.variable == Variable::Log);
    for (std::size_t i = 0; i < g.size(); i += 50) CHECK(log.values[i] == Approx(1.0 / std::cosh(g.node(i))).epsilon(1e-13));
}

TEST_CASE("round trip and constants") {
    const LogGrid g(10.0, 201);
    const Profile U = bubble(g);
    const Profile back = from_log_profile(to_log_profile(U));
    CHECK((back.values - U.values).cwiseAbs().maxCoeff() <= 1e-15 * U.values.cwiseAbs().maxCoeff());
    const Profile one = sample_profile(kSech, g, Variable::Log, [](double) { return 1.0; });
    const Profile radial = from_log_profile(one);
    for (std::size_t i = 0; i < g.size(); i += 20) {
        const double r = std::exp(g.node(i));
        CHECK(radial.values[i] == Approx(std::pow(r, -1.0)).epsilon(1e-14));
        CHECK(radial.coordinate(i) == Approx(r));
    }
    CHECK_THROWS(to_log_profile(one));
    CHECK_THROWS(from_log_profile(U));
}

TEST_CASE("parity tags") {
    const LogGrid g(10.0, 201);
    Profile even = sample_profile(kSech, g, Variable::Log, [](double k) { return std::exp(-k * k); });
    set_parity(even, Parity::Even);
    CHECK(even.parity == Parity::Even);
    CHECK_THROWS(set_parity(even, Parity::Odd));
    Profile odd = sample_profile(kSech, g, Variable::Log, [](double k) { return std::tanh(k); });
    CHECK_NOTHROW(set_parity(odd, Parity::Odd));
    // an even log profile is a radial profile equal to its Kelvin-type image
    Profile U = bubble(g);
    CHECK_NOTHROW(set_parity(U, Parity::Even));
    for (std::size_t i = 0; i < g.size(); i += 10) {
        const double r = U.coordinate(i);
        CHECK(U.values[i] == Approx(std::pow(r, -2.0) * U.values[g.mirror(i)]).epsilon(1e-12));
    }
}

TEST_CASE("generator z") {
    const LogGrid g(18.0, 2001);
    const Profile U = bubble(g);
    const Profile z = generator_z(U);
    const Profile zd = generator_z_direct(U);
    const std::size_t at_e = g.center() + static_cast<std::size_t>(std::lround(1.0 / g.spacing()));
    REQUIRE(std::abs(g.node(at_e) - 1.0) < 0.01);
    const double expected = std::exp(-g.node(at_e)) * (-std::tanh(g.node(at_e)) / std::cosh(g.node(at_e)));
    CHECK(z.values[at_e] == Approx(expected).epsilon(1e-8));
    CHECK(expected == Approx(-0.18157).epsilon(2e-2));
    CHECK(std::abs(z.values[g.center()]) < 1e-12);
    CHECK((z.values - zd.values).cwiseAbs().maxCoeff() < 1e-7);
    // scaling family lambda^{(N-2s)/2} U(lambda r)
    const double dl = 1e-4;
    for (std::size_t i = g.center() - 300; i < g.center() + 300; i += 60) {
        const double r = U.coordinate(i);
        auto family = [&](double l) { return l * 2.0 / (1.0 + l * l * r * r); };
        const double fd = (family(1 + dl) - family(1 - dl)) / (2 * dl);
        CHECK(z.values[i] == Approx(fd).epsilon(1e-6));
    }
    CHECK_THROWS(generator_z(bubble(LogGrid(18.0, 301))));
}

TEST_CASE("decay rates") {
    const LogGrid g(18.0, 2001);
    const Profile sech = sample_profile(kSech, g, Variable::Log, [](double k) { return 1.0 / std::cosh(k); });
    const auto [l, r] = decay_rate_fit(sech);
    CHECK(l == Approx(1.0).epsilon(1e-6));
    CHECK(r == Approx(1.0).epsilon(1e-6));
    const Profile exp2 = sample_profile(kSech, g, Variable::Log, [](double k) { return std::exp(-2.0 * std::abs(k)); });
    const auto [l2, r2] = decay_rate_fit(exp2);
    CHECK(l2 == Approx(2.0));
    CHECK(r2 == Approx(2.0));
    const Profile neg = sample_profile(kSech, g, Variable::Log, [](double k) { return -1.0 / std::cosh(k); });
    CHECK_THROWS(decay_rate_fit(neg));
}

TEST_CASE("derivative is fourth order") {
    auto err = [](std::size_t M) {
        const LogGrid g(4.0, M);
        Eigen::VectorXd v(M), d(M);
        for (std::size_t i = 0; i < M; ++i) {
            v[i] = std::sin(g.node(i));
            d[i] = std::cos(g.node(i));
        }
        return (derivative(g, v) - d).cwiseAbs().maxCoeff();
    };
    const double ratio = err(201) / err(401);
    CHECK(ratio > 12.0);
}

TEST_CASE("profile csv round trip") {
    const LogGrid g(10.0, 101);
    Profile U = bubble(g);
    set_parity(U, Parity::Even);
    const auto file = std::filesystem::temp_directory_path() / "henon_profile_test.csv";
    write_profile_csv(U, file);
    const Profile back = read_profile_csv(file);
    CHECK(back.values == U.values);
    CHECK(back.variable == Variable::Radial);
    CHECK(back.parity == Parity::Even);
    CHECK(back.params.p == U.params.p);
    CHECK(back.grid == U.grid);
    std::filesystem::remove(file);
}
