#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "henon/spectrum.hpp"

using namespace henon;
using doctest::Approx;

namespace {

struct Case {
    Params params;
    LogGrid grid;
    OperatorMatrix op;
    GroundState gs;
    OperatorMatrix lin;
    SpectrumReport report;

    Case(Params p, LogGrid g)
        : params(p), grid(g), op(assemble_T(p, g)), gs(solve_ground_state(op)),
          lin(assemble_linearized(op, gs.profile.values, p.p)), report(parity_spectrum(lin)) {}
};

const Case& sech_case() {
    static const Case c(Params::make(3, 0.5, 0.0), LogGrid(18.0, 1201));
    return c;
}

}  // namespace

TEST_CASE("sign changes") {
    std::vector<double> cosine;
    for (int i = 1; i <= 1000; ++i) cosine.push_back(std::cos(10.0 * i / 1000.0));
    CHECK(sign_changes(cosine) == 3);
    const std::vector<double> noisy{1.0, 1e-12, -1e-12, 1.0, -0.5};
    CHECK(sign_changes(noisy) == 1);
    CHECK_THROWS(sign_changes(std::vector<double>(5, 0.0)));
    const auto& c = sech_case();
    const Eigen::VectorXd dU = -derivative(c.grid, c.gs.profile.values);
    CHECK(half_line_sign_changes(c.grid, dU) == 0);
}

TEST_CASE("linearization") {
    const auto& c = sech_case();
    const Eigen::VectorXd& Q = c.gs.profile.values;
    const double p = c.params.p;
    CHECK((c.lin.entries - c.lin.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::VectorXd LQ = c.lin.apply_shifted(Q);
    const Eigen::VectorXd target = (1.0 - p) * positive_power(Q, p);
    CHECK((LQ - target).norm() < 1e-8 * target.norm());
    const Eigen::VectorXd dU = derivative(c.grid, Q);
    CHECK(c.lin.apply_shifted(dU).norm() <= 1e-3 * dU.norm());
    const OperatorMatrix free = assemble_linearized(c.op, Eigen::VectorXd::Zero(c.grid.size()), p);
    const SpectrumReport r = parity_spectrum(free);
    CHECK(r.even.front().value >= 0.0);
    CHECK(r.odd.front().value >= 0.0);
    CHECK(morse_index(r).count == 0);
    CHECK_THROWS(assemble_linearized(c.op, Eigen::VectorXd::Zero(4), p));
}

TEST_CASE("parity spectrum of the sech state") {
    const auto& r = sech_case().report;
    REQUIRE(r.even.size() >= 3);
    REQUIRE(r.odd.size() >= 3);
    CHECK(r.lambda1() < 0.0);
    CHECK(r.even[1].value > 0.0);
    for (std::size_t i = 1; i < r.even.size(); ++i) CHECK(r.even[i].value >= r.even[i - 1].value);
    CHECK(r.even.front().vector.minCoeff() > 0.0);
    CHECK(r.even.front().radial_sign_changes == 0);
    const Eigenpair& zero = r.odd_zero_mode();
    CHECK(std::abs(zero.value) <= 1e-3 * std::abs(r.lambda1()));
    CHECK(zero.zero_mode);
    CHECK(zero.sign_changes == 0);
    const std::size_t c = sech_case().grid.center();
    CHECK(zero.vector.tail(c).minCoeff() > 0.0);
    for (const auto& e : r.even) CHECK(std::abs(e.value) > 10.0 * r.zero_tol);
    CHECK(r.even[1].radial_sign_changes <= 2);
    CHECK(r.morse_index_full == 1);
    CHECK(r.morse_index_even == 1);
    CHECK_FALSE(r.morse_indeterminate);
    CHECK(r.essential_edge == Approx(hardy_constant(3, 0.5)));
}

TEST_CASE("eigenvectors are orthonormal") {
    const auto& c = sech_case();
    const double h = c.grid.spacing();
    std::vector<const Eigenpair*> all;
    for (const auto& e : c.report.even) all.push_back(&e);
    for (const auto& e : c.report.odd) all.push_back(&e);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j)
            CHECK(std::abs(h * all[i]->vector.dot(all[j]->vector) - (i == j ? 1.0 : 0.0)) < 1e-8);
}

TEST_CASE("morse index") {
    const auto& c = sech_case();
    CHECK(morse_index(c.report).count == 1);
    OperatorMatrix shifted = c.lin;
    shifted.entries.diagonal().array() -= c.report.lambda1();
    CHECK(morse_index(parity_spectrum(shifted), 1e-8).count == 0);
    SpectrumReport fake = c.report;
    fake.odd.front().value = -0.5 * fake.zero_tol;
    CHECK(morse_index(fake).indeterminate);
}

TEST_CASE("zero mode against the translation and scaling generators") {
    const auto& c = sech_case();
    const Eigenpair& zero = c.report.odd_zero_mode();
    const Eigen::VectorXd dU = derivative(c.grid, c.gs.profile.values);
    CHECK(std::abs(cosine_similarity(zero.vector, dU)) > 0.999);
    const Profile z = generator_z(from_log_profile(c.gs.profile));
    const Profile mode = from_log_profile(Profile{c.grid, c.params, zero.vector, Variable::Log, Parity::Odd});
    CHECK(std::abs(cosine_similarity(mode.values, z.values)) > 0.999);
}

TEST_CASE("zero mode shrinks under refinement") {
    const Case coarse(Params::make(3, 0.5, 0.0), LogGrid(13.0, 361));
    const Case fine(Params::make(3, 0.5, 0.0), LogGrid(18.0, 1001));
    MESSAGE("coarse " << coarse.report.odd_zero_mode().value << " fine " << fine.report.odd_zero_mode().value);
    CHECK(std::abs(fine.report.odd_zero_mode().value) <= std::max(std::abs(coarse.report.odd_zero_mode().value), 1e-12));
    CHECK(std::abs(fine.report.odd_zero_mode().value) <= 1e-3 * std::abs(fine.report.lambda1()));
}

TEST_CASE("weighted case") {
    const Case c(Params::make(3, 0.75, 0.5), LogGrid(18.0, 1201));
    CHECK(c.report.morse_index_full == 1);
    CHECK(std::abs(c.report.odd_zero_mode().value) <= 1e-3 * std::abs(c.report.lambda1()));
    CHECK(c.report.even[1].radial_sign_changes <= 2);
}

TEST_CASE("dp invariant") {
    const DpInvariant d = dp_invariant_check(Params::make(3, 0.5, 0.0, 2.0), LogGrid(18.0, 1201), 1e-3);
    CHECK(d.residual < 1e-2);
    CHECK(d.w_sign_changes == 1);
    CHECK(d.q_star < 1.0);
    // with Q(kappa*) < 1 the comparison function is nonpositive first
    CHECK_FALSE(d.w_nonnegative_first);
    CHECK(d.w_identity_residual < 1e-2);
    CHECK_THROWS(dp_invariant_check(Params::make(3, 0.5, 0.0, 2.0), LogGrid(18.0, 1201), 0.0));
}

TEST_CASE("singular map") {
    const auto& c = sech_case();
    const SingularReport s = singular_map(c.report, c.params);
    CHECK(s.lambda1 < 0.0);
    CHECK(s.lambda1 == c.report.lambda1());
    CHECK(s.lambda2 >= -1e-9);
    CHECK(s.lambda2_below_hardy);
    CHECK(s.margin > 0.0);
    CHECK(s.pairs.front().eigenfunction.variable == Variable::Radial);
}

TEST_CASE("report serialization") {
    const auto& c = sech_case();
    const auto dir = std::filesystem::temp_directory_path() / "henon_spectrum_test";
    std::filesystem::create_directories(dir);
    write_spectrum_csv(c.report, dir / "spectrum.csv");
    write_spectrum_json(c.report, dir / "spectrum.json");
    std::ifstream in(dir / "spectrum.csv");
    std::string line;
    int rows = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.rfind("index,parity,eigenvalue,sign_changes,zero_mode_flag", 0) == 0) header = true;
        else if (!line.empty() && line[0] != '#') ++rows;
    }
    CHECK(header);
    CHECK(rows == static_cast<int>(c.report.even.size() + c.report.odd.size()));
    CHECK(std::filesystem::file_size(dir / "spectrum.json") > 0);
    std::filesystem::remove_all(dir);
}
