#include "henon/continuation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "henon/kernel.hpp"
#include "henon/spectrum.hpp"

namespace henon {

Params branch_params(int N, double s, double p) {
    const double alpha = 0.5 * (p * (N - 2.0 * s) - N - 2.0 * s);
    return Params::make(N, s, alpha, p);
}

Profile endpoint_soliton(double p, double A, const LogGrid& grid, int N) {
    if (!(p > 1.0) || !(A > 0.0)) throw std::invalid_argument("endpoint_soliton needs p > 1 and A > 0");
    const double amplitude = std::pow(0.5 * (p + 1.0) * A, 1.0 / (p - 1.0));
    const double rate = 0.5 * (p - 1.0) * std::sqrt(A);
    Params params{N, 1.0, 0.5 * (p * (N - 2.0) - N - 2.0), p};
    Profile out = sample_profile(params, grid, Variable::Log, [&](double kappa) {
        return amplitude * std::pow(1.0 / std::cosh(rate * kappa), 2.0 / (p - 1.0));
    });
    out.parity = Parity::Even;
    return out;
}

std::pair<Eigen::VectorXd, int> correct(const OperatorMatrix& op, const Eigen::VectorXd& start, double tol,
                                        int max_newton) {
    const double p = op.params.p;
    const EvenReduction even(op.grid);
    const Eigen::MatrixXd Be = even.matrix(op.shifted());
    const Eigen::VectorXd D = even.weights();
    Eigen::MatrixXd S = D.asDiagonal() * Be;
    S = 0.5 * (S + S.transpose()).eval();
    const Eigen::LLT<Eigen::MatrixXd> chol(S);
    if (chol.info() != Eigen::Success) throw SolveError("T + A is not positive definite", op.params.describe());

    auto mapped = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
        return u - chol.solve(D.cwiseProduct(positive_power(u, p)));
    };
    auto size = [&](const Eigen::VectorXd& f) { return std::sqrt(D.dot(f.cwiseAbs2())); };

    Eigen::VectorXd u = even.restrict(start);
    Eigen::VectorXd F = mapped(u);
    int it = 0;
    while (residual_norm(op, p, even.expand(u)) >= tol) {
        if (it == max_newton) {
            std::ostringstream msg;
            msg << "s = " << op.params.s << ", |F| = " << size(F);
            throw SolveError("corrector did not converge", msg.str());
        }
        ++it;
        Eigen::MatrixXd jac = Be;
        jac.diagonal() -= p * positive_power(u, p - 1.0);
        const Eigen::VectorXd delta = jac.partialPivLu().solve(-(Be * F));
        const Eigen::VectorXd next = u + delta;
        const Eigen::VectorXd F_next = mapped(next);
        if (!std::isfinite(size(F_next)) || (it > 2 && size(F_next) > size(F))) {
            std::ostringstream msg;
            msg << "s = " << op.params.s << ", |F| grew from " << size(F) << " to " << size(F_next);
            throw SolveError("corrector diverged", msg.str());
        }
        u = next;
        F = F_next;
    }
    return {even.expand(u), it};
}

namespace {

OperatorMatrix branch_operator(const Params& params, const LogGrid& grid, const ContinuationOptions& opts) {
    return assemble_T(params, grid, cached_kernel_table(params, grid, opts.quad_tol, opts.cache_dir));
}

BranchPoint make_point(const OperatorMatrix& op, const Eigen::VectorXd& Q, int iters) {
    const LogGrid& grid = op.grid;
    const double p = op.params.p;
    const double h = grid.spacing();
    BranchPoint pt{op.params.s, Profile{grid, op.params, Q, Variable::Log, Parity::None}};
    set_parity(pt.Q, Parity::Even);
    pt.residual = residual_norm(op, p, Q);
    pt.sup_norm = Q.cwiseAbs().maxCoeff();
    pt.min_value = Q.minCoeff();
    pt.l2_norm = std::sqrt(h * Q.squaredNorm());
    pt.lp1_norm = std::pow(h * Q.cwiseAbs().array().pow(p + 1.0).sum(), 1.0 / (p + 1.0));
    pt.newton_iters = iters;
    if (pt.min_value > 0.0) {
        const auto [left, right] = decay_rate_fit(pt.Q);
        pt.decay_left = left;
        pt.decay_right = right;
        const Eigen::VectorXd lambda = even_eigenvalues(assemble_linearized(op, Q, p));
        const double tol = 1e-3 * std::abs(lambda[0]);
        pt.morse_index_even = static_cast<int>((lambda.array() < -tol).count());
    }
    return pt;
}

void monitor(const BranchPoint& pt, double sup_bound) {
    std::ostringstream msg;
    if (!(pt.min_value > 0.0)) {
        msg << "positivity lost at s = " << pt.s << " (min " << pt.min_value << ")";
        throw MonitorViolation(msg.str(), pt);
    }
    if (pt.morse_index_even != 1) {
        msg << "even Morse index " << pt.morse_index_even << " at s = " << pt.s;
        throw MonitorViolation(msg.str(), pt);
    }
    if (pt.sup_norm > sup_bound) {
        msg << "sup norm " << pt.sup_norm << " exceeds bound " << sup_bound << " at s = " << pt.s;
        throw MonitorViolation(msg.str(), pt);
    }
}

}  // namespace

Branch continue_branch(int N, double p, double s0, double s_end, const LogGrid& grid, const ContinuationOptions& opts) {
    if (s_end < s0) throw std::invalid_argument("continue_branch needs s_end >= s0");
    SolveOptions solve_opts;
    solve_opts.tol = opts.tol;
    solve_opts.quad_tol = opts.quad_tol;

    Branch branch;
    branch.sup_safety = opts.sup_safety;
    const OperatorMatrix op0 = branch_operator(branch_params(N, s0, p), grid, opts);
    const GroundState start = solve_ground_state(op0, solve_opts);
    BranchPoint first = make_point(op0, start.profile.values, start.newton_iterations);
    branch.sup_bound = first.sup_norm * opts.sup_safety;
    monitor(first, branch.sup_bound);
    branch.points.push_back(std::move(first));

    double s = s0;
    double ds = std::min(opts.ds_initial, opts.ds_max);
    double ds_prev = 0.0;
    int easy = 0;
    while (s < s_end) {
        if (ds < opts.ds_min) break;
        const double s_next = std::min(s + ds, s_end);
        const double step = s_next - s;
        const Eigen::VectorXd& Q = branch.points.back().Q.values;
        Eigen::VectorXd guess = Q;
        if (branch.points.size() >= 2 && ds_prev > 0.0) {
            guess += (Q - branch.points[branch.points.size() - 2].Q.values) * (step / ds_prev);
        }
        const OperatorMatrix op = branch_operator(branch_params(N, s_next, p), grid, opts);
        std::pair<Eigen::VectorXd, int> result;
        try {
            result = correct(op, guess, opts.tol, opts.max_newton);
        } catch (const SolveError&) {
            ds *= 0.5;
            easy = 0;
            continue;
        }
        BranchPoint pt = make_point(op, result.first, result.second);
        monitor(pt, branch.sup_bound);
        const double h = grid.spacing();
        branch.continuity_constant =
            std::max(branch.continuity_constant, std::sqrt(h * (pt.Q.values - Q).squaredNorm()) / step);
        branch.points.push_back(std::move(pt));
        ds_prev = step;
        s = s_next;
        if (result.second <= opts.easy_newton && ++easy >= 3) {
            ds = std::min(2.0 * ds, opts.ds_max);
            easy = 0;
        } else if (result.second > opts.easy_newton) {
            easy = 0;
        }
    }
    branch.s_star = s;
    branch.reached_end = s >= s_end;

    // Local uniqueness: restart the corrector from a perturbed even profile.
    const std::size_t n = branch.points.size();
    const int probes = std::min<int>(opts.restart_probes, static_cast<int>(n));
    for (int k = 0; k < probes; ++k) {
        const std::size_t idx = probes == 1 ? n - 1 : (n - 1) * static_cast<std::size_t>(k) / (probes - 1);
        const BranchPoint& pt = branch.points[idx];
        const OperatorMatrix op = branch_operator(pt.Q.params, grid, opts);
        Eigen::VectorXd perturbed = pt.Q.values;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            perturbed[i] *= 1.0 + opts.restart_perturbation / std::cosh(0.5 * grid.node(i));
        }
        const auto [values, iters] = correct(op, perturbed, opts.tol, opts.max_newton);
        branch.probes.push_back({pt.s, std::sqrt(grid.spacing() * (values - pt.Q.values).squaredNorm()), iters});
    }
    return branch;
}

void write_branch_csv(const Branch& branch, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    out << "# henon-lab branch\n";
    if (!branch.points.empty()) {
        const Params& p = branch.points.front().Q.params;
        out << "# N=" << p.N << "\n# p=" << num(p.p) << "\n";
        out << "# L=" << num(branch.points.front().Q.grid.half_width()) << "\n# M=" << branch.points.front().Q.grid.size()
            << "\n";
    }
    out << "# sup_bound=" << num(branch.sup_bound) << "\n# sup_safety=" << num(branch.sup_safety) << "\n";
    out << "# reached_end=" << (branch.reached_end ? 1 : 0) << "\n# s_star=" << num(branch.s_star) << "\n";
    out << "s,sup_norm,min_value,residual,morse_index_even,L2_norm,Lp1_norm,newton_iters\n";
    for (const auto& pt : branch.points) {
        out << num(pt.s) << ',' << num(pt.sup_norm) << ',' << num(pt.min_value) << ',' << num(pt.residual) << ','
            << pt.morse_index_even << ',' << num(pt.l2_norm) << ',' << num(pt.lp1_norm) << ',' << pt.newton_iters << '\n';
    }
}

}  // namespace henon
