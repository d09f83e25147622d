#include "henon/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace henon {

const Eigenpair& SpectrumReport::odd_zero_mode() const {
    if (odd.empty()) throw std::logic_error("spectrum report has no odd eigenpairs");
    return *std::min_element(odd.begin(), odd.end(),
                             [](const Eigenpair& a, const Eigenpair& b) { return std::abs(a.value) < std::abs(b.value); });
}

OperatorMatrix assemble_linearized(const OperatorMatrix& op, const Eigen::VectorXd& Q, double p) {
    if (static_cast<std::size_t>(Q.size()) != op.size()) throw std::invalid_argument("assemble_linearized: dimension mismatch");
    OperatorMatrix out = op;
    out.entries.diagonal() -= p * positive_power(Q, p - 1.0);
    return out;
}

int sign_changes(std::span<const double> values, double deadband) {
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw std::invalid_argument("sign_changes: all-zero profile");
    const double delta = deadband * scale;
    int count = 0;
    int last = 0;
    for (double v : values) {
        if (std::abs(v) <= delta) continue;
        const int sign = v > 0.0 ? 1 : -1;
        if (last != 0 && sign != last) ++count;
        last = sign;
    }
    return count;
}

int half_line_sign_changes(const LogGrid& grid, const Eigen::VectorXd& v, double deadband) {
    const std::size_t c = grid.center();
    return sign_changes(std::span<const double>(v.data() + c + 1, grid.size() - c - 1), deadband);
}

namespace {

// Parity blocks in the orthonormal bases e_c, (e_{c+j} +- e_{c-j})/sqrt2.
Eigen::MatrixXd even_block(const Eigen::MatrixXd& L, std::size_t c) {
    const std::size_t n = c + 1;
    Eigen::MatrixXd out(n, n);
    out(0, 0) = L(c, c);
    for (std::size_t k = 1; k < n; ++k) {
        out(0, k) = std::sqrt(2.0) * L(c, c + k);
        out(k, 0) = out(0, k);
    }
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t k = 1; k < n; ++k) out(j, k) = L(c + j, c + k) + L(c + j, c - k);
    return out;
}

Eigen::MatrixXd odd_block(const Eigen::MatrixXd& L, std::size_t c) {
    Eigen::MatrixXd out(c, c);
    for (std::size_t j = 1; j <= c; ++j)
        for (std::size_t k = 1; k <= c; ++k) out(j - 1, k - 1) = L(c + j, c + k) - L(c + j, c - k);
    return out;
}

Eigen::VectorXd lift(const Eigen::VectorXd& y, std::size_t c, Parity parity, double h) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * c + 1);
    const double r = 1.0 / std::sqrt(2.0);
    if (parity == Parity::Even) {
        v[c] = y[0];
        for (std::size_t j = 1; j <= c; ++j) {
            v[c + j] = r * y[j];
            v[c - j] = r * y[j];
        }
    } else {
        for (std::size_t j = 1; j <= c; ++j) {
            v[c + j] = r * y[j - 1];
            v[c - j] = -r * y[j - 1];
        }
    }
    v /= std::sqrt(h);
    // Sign convention: positive mass on kappa > 0 (center value for even vectors).
    const double mass = parity == Parity::Even ? v.tail(c + 1).sum() : v.tail(c).sum();
    if (mass < 0.0) v = -v;
    return v;
}

std::vector<Eigenpair> solve_block(const Eigen::MatrixXd& block, const LogGrid& grid, Parity parity,
                                   const SpectrumOptions& opts, double edge) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    std::vector<Eigenpair> out;
    const int count = std::min<int>(opts.k, static_cast<int>(block.rows()));
    for (int i = 0; i < count; ++i) {
        Eigenpair e;
        e.value = solver.eigenvalues()[i];
        e.parity = parity;
        e.vector = lift(solver.eigenvectors().col(i), grid.center(), parity, grid.spacing());
        e.sign_changes = half_line_sign_changes(grid, e.vector, opts.deadband);
        e.radial_sign_changes = sign_changes(std::span<const double>(e.vector.data(), e.vector.size()), opts.deadband);
        e.discrete = e.value < edge;
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace

SpectrumReport parity_spectrum(const OperatorMatrix& linearized, const SpectrumOptions& opts) {
    if (opts.k < 3) throw std::invalid_argument("parity_spectrum needs k >= 3");
    const LogGrid& grid = linearized.grid;
    const Eigen::MatrixXd L = linearized.shifted();
    const std::size_t c = grid.center();
    SpectrumReport report{.params = linearized.params, .grid = grid};
    report.essential_edge = linearized.hardy_shift;
    report.deadband = opts.deadband;
    const double edge = (1.0 - opts.essential_margin) * report.essential_edge;
    report.even = solve_block(even_block(L, c), grid, Parity::Even, opts, edge);
    report.odd = solve_block(odd_block(L, c), grid, Parity::Odd, opts, edge);

    const Params& params = linearized.params;
    const double h = grid.spacing();
    const double truncation = opts.zero_mode_constant *
                              (h * h + std::exp(-(params.N - 2.0 * params.s) * grid.half_width() / 2.0));
    report.zero_tol = std::max(1e-3 * std::abs(report.lambda1()), truncation);
    for (auto* list : {&report.even, &report.odd})
        for (auto& e : *list) e.zero_mode = std::abs(e.value) <= report.zero_tol;

    const MorseCount full = morse_index(report);
    report.morse_index_full = full.count;
    report.morse_indeterminate = full.indeterminate;
    report.morse_index_even = static_cast<int>(
        std::count_if(report.even.begin(), report.even.end(), [&](const Eigenpair& e) { return e.value < -report.zero_tol; }));
    return report;
}

Eigen::VectorXd even_eigenvalues(const OperatorMatrix& linearized) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(even_block(linearized.shifted(), linearized.grid.center()),
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    return solver.eigenvalues();
}

MorseCount morse_index(const SpectrumReport& report, double tol) {
    MorseCount out;
    for (const auto* list : {&report.even, &report.odd}) {
        for (const auto& e : *list) {
            if (e.value < -tol) ++out.count;
            else if (e.value < -tol / 10.0) out.indeterminate = true;
        }
    }
    return out;
}

MorseCount morse_index(const SpectrumReport& report) { return morse_index(report, report.zero_tol); }

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return a.dot(b) / (na * nb);
}

DpInvariant dp_invariant_check(const Params& params, const LogGrid& grid, double dp, double kappa_star,
                               const SolveOptions& opts) {
    if (!(dp > 0.0)) throw std::invalid_argument("dp must be positive");
    const double p = params.p;
    const Params lo = Params::make(params.N, params.s, params.alpha, p - dp);
    const Params hi = Params::make(params.N, params.s, params.alpha, p + dp);
    OperatorMatrix op = assemble_T(params, grid, opts.quad_tol);
    const GroundState base = solve_ground_state(op, opts);
    const Eigen::VectorXd& Q = base.profile.values;
    op.params = hi;
    const GroundState up = solve_ground_state(op, opts, Q);
    op.params = lo;
    const GroundState down = solve_ground_state(op, opts, Q);
    op.params = params;

    DpInvariant out;
    out.v = (up.profile.values - down.profile.values) / (2.0 * dp);
    const OperatorMatrix lin = assemble_linearized(op, Q, p);
    const Eigen::VectorXd logQ = Q.array().log().matrix();
    const Eigen::VectorXd rhs = positive_power(Q, p).cwiseProduct(logQ);
    out.residual = (lin.apply_shifted(out.v) - rhs).norm() / rhs.norm();

    std::size_t star = grid.center();
    double best = std::abs(grid.node(star) - kappa_star);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(grid.node(i) - kappa_star) < best) {
            best = std::abs(grid.node(i) - kappa_star);
            star = i;
        }
    }
    out.kappa_star = grid.node(star);
    out.q_star = Q[star];
    if (std::abs(std::log(out.q_star)) < 1e-12) throw std::invalid_argument("comparison function needs Q(kappa*) != 1");
    const double log_star = std::log(out.q_star);
    out.w = (p - 1.0) * (logQ / log_star - Eigen::VectorXd::Ones(Q.size())).cwiseProduct(positive_power(Q, p));
    out.w_sign_changes = half_line_sign_changes(grid, out.w);
    const std::size_t c = grid.center();
    for (std::size_t i = c + 1; i < grid.size(); ++i) {
        if (std::abs(out.w[i]) > 1e-9 * out.w.cwiseAbs().maxCoeff()) {
            out.w_nonnegative_first = out.w[i] > 0.0;
            break;
        }
    }
    const Eigen::VectorXd combo = (p - 1.0) / log_star * out.v + Q;
    out.w_identity_residual = (lin.apply_shifted(combo) - out.w).norm() / out.w.norm();
    return out;
}

SingularReport singular_map(const SpectrumReport& report, const Params& params) {
    SingularReport out;
    for (const auto* list : {&report.even, &report.odd}) {
        for (const auto& e : *list) {
            Profile log{report.grid, params, e.vector, Variable::Log, e.parity};
            out.pairs.push_back({e.value, e.parity, from_log_profile(log)});
        }
    }
    std::stable_sort(out.pairs.begin(), out.pairs.end(),
                     [](const SingularEigenpair& a, const SingularEigenpair& b) { return a.value < b.value; });
    out.hardy = hardy_constant(params.N, params.s);
    if (out.pairs.size() >= 2) {
        out.lambda1 = out.pairs[0].value;
        out.lambda2 = out.pairs[1].value;
    }
    out.margin = out.hardy - out.lambda2;
    out.lambda2_below_hardy = out.margin > 0.0;
    return out;
}

void write_spectrum_csv(const SpectrumReport& report, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "# henon-lab spectrum\n# " << report.params.describe() << "\n";
    out << "index,parity,eigenvalue,sign_changes,zero_mode_flag,radial_sign_changes,discrete\n";
    char buf[64];
    int index = 0;
    for (const auto* list : {&report.even, &report.odd}) {
        for (const auto& e : *list) {
            std::snprintf(buf, sizeof buf, "%.17g", e.value);
            out << index++ << ',' << to_string(e.parity) << ',' << buf << ',' << e.sign_changes << ','
                << (e.zero_mode ? 1 : 0) << ',' << e.radial_sign_changes << ',' << (e.discrete ? 1 : 0) << '\n';
        }
    }
}

void write_spectrum_json(const SpectrumReport& report, const std::filesystem::path& file) {
    nlohmann::ordered_json j;
    j["N"] = report.params.N;
    j["s"] = report.params.s;
    j["alpha"] = report.params.alpha;
    j["p"] = report.params.p;
    j["L"] = report.grid.half_width();
    j["M"] = report.grid.size();
    j["essential_edge"] = report.essential_edge;
    j["zero_tol"] = report.zero_tol;
    j["deadband"] = report.deadband;
    j["morse_index_full"] = report.morse_index_full;
    j["morse_index_even"] = report.morse_index_even;
    j["morse_indeterminate"] = report.morse_indeterminate;
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << j.dump(2) << '\n';
}

}  // namespace henon
