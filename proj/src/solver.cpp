#include "henon/solver.hpp"

#include <cmath>
#include <sstream>

namespace henon {

Eigen::VectorXd EvenReduction::expand(const Eigen::VectorXd& half) const {
    Eigen::VectorXd full(2 * center + 1);
    full.tail(size) = half;
    for (std::size_t j = 1; j < size; ++j) full[center - j] = half[j];
    return full;
}

Eigen::MatrixXd EvenReduction::matrix(const Eigen::MatrixXd& full) const {
    Eigen::MatrixXd out(size, size);
    for (std::size_t j = 0; j < size; ++j) {
        out(j, 0) = full(center + j, center);
        for (std::size_t k = 1; k < size; ++k) out(j, k) = full(center + j, center + k) + full(center + j, center - k);
    }
    return out;
}

Eigen::VectorXd EvenReduction::weights() const {
    Eigen::VectorXd d = Eigen::VectorXd::Constant(size, 2.0);
    d[0] = 1.0;
    return d;
}

Eigen::VectorXd positive_power(const Eigen::VectorXd& v, double q) {
    return v.unaryExpr([q](double x) { return x > 0.0 ? std::pow(x, q) : 0.0; });
}

Eigen::VectorXd initial_guess(const Params& params, const LogGrid& grid) {
    const double p = params.p;
    const double m = params.decay_rate();
    Eigen::VectorXd v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        v[i] = std::pow(1.0 / std::cosh(0.5 * (p - 1.0) * m * grid.node(i)), 2.0 / (p - 1.0));
    }
    return v;
}

double energy(const OperatorMatrix& op, double p, const Eigen::VectorXd& v) {
    const double h = op.spacing();
    return 0.5 * h * v.dot(op.apply_shifted(v)) - h * positive_power(v, p + 1.0).sum() / (p + 1.0);
}

Eigen::VectorXd energy_gradient(const OperatorMatrix& op, double p, const Eigen::VectorXd& v) {
    return op.apply_shifted(v) - positive_power(v, p);
}

double nehari_factor(const OperatorMatrix& op, double p, const Eigen::VectorXd& v) {
    const double quad = v.dot(op.apply_shifted(v));
    const double nonlinear = positive_power(v, p + 1.0).sum();
    if (!(quad > 0.0) || !(nonlinear > 0.0)) {
        std::ostringstream msg;
        msg << "quadratic form " << quad << ", nonlinear term " << nonlinear;
        throw SolveError("Nehari scaling undefined", msg.str());
    }
    return std::pow(quad / nonlinear, 1.0 / (p - 1.0));
}

Profile nehari_scale(const Profile& profile, const OperatorMatrix& op, double p) {
    Profile out = profile;
    out.values *= nehari_factor(op, p, profile.values);
    return out;
}

double residual_norm(const OperatorMatrix& op, double p, const Eigen::VectorXd& v) {
    const Eigen::VectorXd vp = positive_power(v, p);
    const double r = (op.apply_shifted(v) - vp).norm();
    const double scale = vp.norm();
    return scale > 0.0 ? r / scale : r * std::sqrt(op.spacing());
}

double residual_norm(const Profile& profile, const OperatorMatrix& op, double p) {
    return residual_norm(op, p, profile.values);
}

namespace {

struct HalfProblem {
    Eigen::MatrixXd S;  // E^T B E, symmetric positive definite
    Eigen::VectorXd D;
    double p;

    double quad(const Eigen::VectorXd& u) const { return u.dot(S * u); }
    double lift(const Eigen::VectorXd& u) const { return D.dot(positive_power(u, p + 1.0)); }
    double nehari(const Eigen::VectorXd& u) const {
        const double a = quad(u), b = lift(u);
        if (!(a > 0.0) || !(b > 0.0)) return 0.0;
        return std::pow(a / b, 1.0 / (p - 1.0));
    }
    // Energy of u on the Nehari manifold, up to the factor h.
    double level(const Eigen::VectorXd& u) const { return (0.5 - 1.0 / (p + 1.0)) * quad(u); }
};

double half_residual(const Eigen::MatrixXd& Be, const Eigen::VectorXd& D, double p, const Eigen::VectorXd& u) {
    const Eigen::VectorXd up = positive_power(u, p);
    const Eigen::VectorXd r = Be * u - up;
    const double num = std::sqrt(D.dot(r.cwiseAbs2()));
    const double den = std::sqrt(D.dot(up.cwiseAbs2()));
    return den > 0.0 ? num / den : num;
}

}  // namespace

std::pair<Eigen::VectorXd, int> newton_even(const OperatorMatrix& op, double p, const Eigen::VectorXd& start,
                                            const SolveOptions& opts) {
    const EvenReduction even(op.grid);
    const Eigen::MatrixXd Be = even.matrix(op.shifted());
    const Eigen::VectorXd D = even.weights();
    Eigen::VectorXd u = even.restrict(start);
    double res = half_residual(Be, D, p, u);
    int it = 0;
    while (res >= opts.tol) {
        if (it == opts.max_newton) {
            std::ostringstream msg;
            msg << "residual " << res << " after " << it << " Newton iterations";
            throw SolveError("Newton did not converge", msg.str());
        }
        ++it;
        Eigen::MatrixXd jac = Be;
        jac.diagonal() -= p * positive_power(u, p - 1.0);
        const Eigen::VectorXd step = jac.partialPivLu().solve(Be * u - positive_power(u, p));
        double damping = 1.0;
        Eigen::VectorXd trial = u - step;
        double trial_res = half_residual(Be, D, p, trial);
        while (!(trial_res < res) && damping > 1e-3) {
            damping *= 0.5;
            trial = u - damping * step;
            trial_res = half_residual(Be, D, p, trial);
        }
        if (!(trial_res < res)) {
            std::ostringstream msg;
            msg << "residual stalled at " << res << " after " << it << " Newton iterations";
            throw SolveError("Newton did not converge", msg.str());
        }
        u = trial;
        res = trial_res;
    }
    return {even.expand(u), it};
}

void check_ground_state(const LogGrid& grid, const Eigen::VectorXd& v) {
    const std::size_t c = grid.center();
    const double peak = v.maxCoeff();
    std::ostringstream msg;
    if (!(v.minCoeff() > 0.0)) {
        msg << "min value " << v.minCoeff();
        throw SolveError("loss of positivity", msg.str());
    }
    if (v[c] < peak) {
        msg << "center value " << v[c] << " below max " << peak;
        throw SolveError("profile not peaked at the center", msg.str());
    }
    for (std::size_t i = c + 1; i < grid.size(); ++i) {
        if (v[i] > v[i - 1] + 1e-12 * peak) {
            msg << "increase at kappa = " << grid.node(i);
            throw SolveError("profile not decreasing on kappa > 0", msg.str());
        }
    }
}

GroundState solve_ground_state(const OperatorMatrix& op, const SolveOptions& opts,
                               const std::optional<Eigen::VectorXd>& start) {
    const double p = op.params.p;
    const EvenReduction even(op.grid);
    const Eigen::MatrixXd Be = even.matrix(op.shifted());
    HalfProblem prob{even.weights().asDiagonal() * Be, even.weights(), p};
    prob.S = 0.5 * (prob.S + prob.S.transpose()).eval();
    const Eigen::LLT<Eigen::MatrixXd> chol(prob.S);
    if (chol.info() != Eigen::Success) throw SolveError("T + A is not positive definite", op.params.describe());

    Eigen::VectorXd u = even.restrict(start ? *start : initial_guess(op.params, op.grid));
    const double t0 = prob.nehari(u);
    if (t0 == 0.0) throw SolveError("initial guess has no Nehari scaling", op.params.describe());
    u *= t0;

    auto gradient = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return x - chol.solve(prob.D.cwiseProduct(positive_power(x, p)));
    };

    GroundState out{Profile{op.grid, op.params, Eigen::VectorXd(), Variable::Log, Parity::None}};
    Eigen::VectorXd g = gradient(u);
    double level = prob.level(u);
    double tau = 1.0;
    Eigen::VectorXd u_prev, g_prev;
    int it = 0;
    for (; it < opts.max_flow; ++it) {
        if (it > 0) {
            const Eigen::VectorXd ds = u - u_prev, dg = g - g_prev;
            const double num = ds.dot(prob.S * ds), den = ds.dot(prob.S * dg);
            tau = den > 0.0 ? std::clamp(num / den, 1e-3, 1e3) : 1.0;
        }
        Eigen::VectorXd next;
        double next_level = level;
        bool accepted = false;
        for (int back = 0; back < 30; ++back) {
            next = u - tau * g;
            const double t = prob.nehari(next);
            if (t > 0.0) {
                next *= t;
                next_level = prob.level(next);
                if (next_level < level) {
                    accepted = true;
                    break;
                }
            }
            tau *= 0.5;
        }
        if (!accepted) break;
        const double decrease = (level - next_level) / std::abs(next_level);
        u_prev = u;
        g_prev = g;
        u = next;
        g = gradient(u);
        level = next_level;
        if (decrease < opts.flow_stagnation) {
            ++it;
            break;
        }
    }
    out.flow_iterations = it;

    auto [full, newton_iters] = newton_even(op, p, even.expand(u), opts);
    out.newton_iterations = newton_iters;
    check_ground_state(op.grid, full);
    out.profile.values = full;
    set_parity(out.profile, Parity::Even);
    out.residual = residual_norm(op, p, full);
    out.energy = energy(op, p, full);
    return out;
}

GroundState solve_ground_state(const Params& params, const LogGrid& grid, const SolveOptions& opts) {
    return solve_ground_state(assemble_T(params, grid, opts.quad_tol), opts);
}

}  // namespace henon
