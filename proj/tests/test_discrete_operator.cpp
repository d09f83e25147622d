#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

#include "henon/discrete_operator.hpp"

using namespace henon;
using doctest::Approx;

namespace {

Eigen::VectorXd sampled(const LogGrid& grid, double (*f)(double)) {
    Eigen::VectorXd v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.node(i));
    return v;
}

double bump(double x) { return std::abs(x) < 3.0 ? std::pow(std::cos(M_PI * x / 6.0), 6) : 0.0; }

}  // namespace

TEST_CASE("grid") {
    const LogGrid g(18.0, 2001);
    CHECK(g.spacing() == Approx(0.018));
    CHECK(g.node(g.center()) == 0.0);
    CHECK(g.node(0) == -g.node(g.size() - 1));
    CHECK(g.refined().size() == 4001);
    CHECK_THROWS(LogGrid(18.0, 2000));
    CHECK_THROWS(LogGrid(-1.0, 11));
}

TEST_CASE("structure: symmetry, reflection, M-matrix, PSD") {
    const Params p = Params::make(3, 0.5, 0.0);
    const LogGrid g(12.0, 601);
    const OperatorMatrix op = assemble_T(p, g);
    const Eigen::MatrixXd& T = op.entries;
    CHECK((T - T.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(g.size(), g.size());
    for (std::size_t i = 0; i < g.size(); ++i) R(i, g.mirror(i)) = 1.0;
    CHECK((R * T - T * R).cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index i = 0; i < T.rows(); ++i) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < T.cols(); ++j) {
            if (j == i) continue;
            CHECK(T(i, j) <= 0.0);
            off += std::abs(T(i, j));
        }
        CHECK(T(i, i) >= off);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()[0] >= -1e-10 * es.eigenvalues().cwiseAbs().maxCoeff());
}

TEST_CASE("constants are annihilated under the constant closure") {
    const Params p = Params::make(3, 0.75, 0.0);
    const LogGrid g(12.0, 601);
    const OperatorMatrix op = assemble_T(p, g, kernel_table(p, g), 0.0);
    const Eigen::VectorXd image = op.apply(Eigen::VectorXd::Ones(g.size()));
    const double scale = op.entries.diagonal().maxCoeff();
    CHECK(image.cwiseAbs().maxCoeff() <= 1e-6 * scale);
}

TEST_CASE("mismatched table is rejected") {
    const Params p = Params::make(3, 0.5, 0.0);
    const LogGrid g(12.0, 601);
    CHECK_THROWS_AS(assemble_T(p, g, kernel_table(p, LogGrid(12.0, 401))), std::invalid_argument);
    CHECK_THROWS_AS(assemble_T(Params::make(3, 0.6, 0.0), g, kernel_table(p, g)), std::invalid_argument);
}

TEST_CASE("power symbol is reproduced") {
    const Params p = Params::make(3, 0.5, 0.0);
    const LogGrid g(18.0, 2001);
    const OperatorMatrix op = assemble_T(p, g);
    const std::vector<double> zero{0.0};
    CHECK(symbol_error(op, zero) < 1e-4);
    const std::vector<double> half{0.5};
    CHECK(symbol_error(op, half) < 1e-3);
    const std::vector<double> sweep{0.0, 0.25, -0.25, 0.45 * 2, -0.45 * 2};
    CHECK(symbol_error(op, sweep) < 1e-3);
    // degradation near the margin stays finite
    const std::vector<double> edge{0.999};
    CHECK(std::isfinite(symbol_error(op, edge)));
    const std::vector<double> outside{1.0};
    CHECK_THROWS(symbol_error(op, outside));
}

TEST_CASE("symbol error decreases under refinement") {
    // error order h^{4-2s}; (2, 0.3) would sit on the e^{-(N+2s)L/2} truncation floor
    const Params p = Params::make(3, 0.75, 0.0);
    const std::vector<double> a{0.3};
    const double coarse = symbol_error(p, LogGrid(20.0, 1001), a);
    const double fine = symbol_error(p, LogGrid(20.0, 2001), a);
    MESSAGE("ratio " << coarse / fine);
    CHECK(coarse / fine > 3.0);
}

TEST_CASE("quadratic fallback is consistent") {
    const Params p = Params::make(3, 0.5, 0.0);
    const LogGrid g(14.0, 1401);
    const KernelTable table = kernel_table(p, g);
    const auto corrected = operator_weights(p, table, NearDiagonalRule::CorrectedTrapezoid);
    const auto fallback = operator_weights(p, table, NearDiagonalRule::QuadraticFallback);
    CHECK(corrected.size() == fallback.size());
    for (std::size_t k = 2; k < corrected.size(); k += 37) CHECK(corrected[k] == fallback[k]);
    CHECK(fallback[1] == Approx(corrected[1]).epsilon(0.2));
}

TEST_CASE("rayleigh form") {
    const Params p = Params::make(3, 0.5, 0.0);
    const LogGrid g(18.0, 2001);
    const OperatorMatrix op = assemble_T(p, g);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(g.size());
    CHECK(rayleigh_form(op, Eigen::VectorXd(), zero) == 0.0);
    const Eigen::VectorXd Q = sampled(g, [](double x) { return 1.0 / std::cosh(x); });
    const Eigen::VectorXd V = -2.0 * Q;
    CHECK(rayleigh_form(op, V, Q) == Approx(-M_PI / 2.0).epsilon(1e-3));
    CHECK(rayleigh_form(op, Eigen::VectorXd(), Q) > 0.0);
    CHECK_THROWS(rayleigh_form(op, Eigen::VectorXd::Zero(3), Q));
}

TEST_CASE("refinement Cauchy property on a compact bump") {
    const Params p = Params::make(3, 0.75, 0.0);
    const LogGrid coarse(12.0, 601), fine(17.0, 1701);
    REQUIRE(std::abs(coarse.spacing() - 2 * fine.spacing()) < 1e-12);
    const OperatorMatrix a = assemble_T(p, coarse), b = assemble_T(p, fine);
    const Eigen::VectorXd ia = a.apply(sampled(coarse, bump)), ib = b.apply(sampled(fine, bump));
    double diff = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        if (std::abs(coarse.node(i)) > 6.0) continue;
        const std::size_t j = fine.center() + 2 * i - 2 * coarse.center();
        diff = std::max(diff, std::abs(ia[i] - ib[j]));
    }
    CHECK(diff < 10.0 * coarse.spacing() * coarse.spacing());
}
