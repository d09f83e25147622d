#include "henon/discrete_operator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace henon {

namespace {

// int_0^h t^2 K(t) dt; the integrand behaves like t^{1-2s} at the origin.
double near_moment(const Params& params, double h, double tol) {
    const double c0 = kernel_singular_coefficient(params.N, params.s);
    const double beta = 1.0 - 2.0 * params.s;
    double total = c0 * std::pow(h, beta + 1.0) / (beta + 1.0);
    double b = h;
    for (int k = 0; k < 30; ++k) {
        const double a = 0.5 * b;
        constexpr int kNodes = 8;
        static const double x[kNodes] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                         -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
        static const double w[kNodes] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                         0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                         0.2223810344533745, 0.1012285362903763};
        double panel = 0.0;
        for (int n = 0; n < kNodes; ++n) {
            const double t = 0.5 * (a + b) + 0.5 * (b - a) * x[n];
            panel += w[n] * (t * t * kernel_value(params, t, tol) - c0 * std::pow(t, beta));
        }
        total += 0.5 * (b - a) * panel;
        b = a;
    }
    return total;
}

}  // namespace

std::vector<double> operator_weights(const Params& params, const KernelTable& table, NearDiagonalRule rule) {
    const double c = normalization_constant(params.N, params.s);
    const double h = table.h;
    std::vector<double> weights(table.length() + 1, 0.0);
    for (std::size_t k = 1; k <= table.length(); ++k) weights[k] = c * h * table.at(k);
    if (rule == NearDiagonalRule::CorrectedTrapezoid) {
        // Trapezoid error of h sum_{k>=1} D(kh) K(kh) for D(t) ~ -v'' t^2 is
        // zeta(2s-1) c v'' h^{2-2s}; with v'' h^2 ~ -(2 v_i - v_{i+1} - v_{i-1}) it
        // becomes a first-neighbour weight.
        const double zeta = std::riemann_zeta(2.0 * params.s - 1.0);
        weights[1] += c * (-zeta) * table.sing_coeff * std::pow(h, -2.0 * params.s);
    } else {
        weights[1] = c * (near_moment(params, h, table.quad_tol) / (h * h) + 0.5 * h * table.at(1));
    }
    return weights;
}

Eigen::MatrixXd OperatorMatrix::shifted() const {
    Eigen::MatrixXd out = entries;
    out.diagonal().array() += hardy_shift;
    return out;
}

OperatorMatrix assemble_T(const Params& params, const LogGrid& grid, const KernelTable& table,
                          std::optional<double> decay_rate) {
    const double h = grid.spacing();
    if (std::abs(table.h - h) > 1e-14 * h || table.N != params.N || table.s != params.s) {
        std::ostringstream msg;
        msg << "kernel table (N=" << table.N << ", s=" << table.s << ", h=" << table.h
            << ") does not match grid/params (N=" << params.N << ", s=" << params.s << ", h=" << h << ")";
        throw std::invalid_argument(msg.str());
    }
    const std::size_t M = grid.size();
    const std::size_t J = table.length();
    if (J < M) throw std::invalid_argument("kernel table shorter than the grid");

    OperatorMatrix op{grid, params, decay_rate.value_or(params.decay_rate()), hardy_constant(params.N, params.s),
                      NearDiagonalRule::CorrectedTrapezoid, Eigen::MatrixXd::Zero(M, M)};
    if (table.fit_residual > kFitResidualThreshold) op.rule = NearDiagonalRule::QuadraticFallback;
    const std::vector<double> W = operator_weights(params, table, op.rule);

    const double m = op.decay_rate;
    const std::size_t B = M - 1;
    std::vector<double> prefix(M, 0.0);
    for (std::size_t n = 1; n < M; ++n) prefix[n] = prefix[n - 1] + W[n];
    // Exterior values seen from node i at distance k = d + q are v_i e^{-m k h}, which
    // leaves only a diagonal term: sum_{k > d} W_k (1 - e^{-m k h}).
    std::vector<double> exterior(M, 0.0);
    double tail = 0.0;
    for (std::size_t k = J; k > B; --k) tail += W[k] * -std::expm1(-m * static_cast<double>(k) * h);
    for (std::size_t d = B + 1; d-- > 0;) {
        exterior[d] = tail;
        if (d > 0) tail += W[d] * -std::expm1(-m * static_cast<double>(d) * h);
    }

    Eigen::MatrixXd& T = op.entries;
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = i + 1; j < M; ++j) {
            T(i, j) = -W[j - i];
            T(j, i) = -W[j - i];
        }
    }
    for (std::size_t i = 0; i < M; ++i) T(i, i) = (prefix[i] + prefix[B - i]) + (exterior[B - i] + exterior[i]);
    return op;
}

OperatorMatrix assemble_T(const Params& params, const LogGrid& grid, double quad_tol) {
    return assemble_T(params, grid, kernel_table(params, grid, quad_tol));
}

double inner(const LogGrid& grid, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return grid.spacing() * a.dot(b);
}

double l2_norm(const LogGrid& grid, const Eigen::VectorXd& v) { return std::sqrt(inner(grid, v, v)); }

double rayleigh_form(const OperatorMatrix& op, const Eigen::VectorXd& potential, const Eigen::VectorXd& v) {
    if (static_cast<std::size_t>(v.size()) != op.size() ||
        (potential.size() != 0 && static_cast<std::size_t>(potential.size()) != op.size())) {
        throw std::invalid_argument("rayleigh_form: dimension mismatch");
    }
    Eigen::VectorXd image = op.apply_shifted(v);
    if (potential.size() != 0) image += potential.cwiseProduct(v);
    return inner(op.grid, v, image);
}

double symbol_error(const OperatorMatrix& op, std::span<const double> a_values, double window) {
    const Params& params = op.params;
    const double m = params.decay_rate();
    const Eigen::VectorXd kappa = Eigen::Map<const Eigen::VectorXd>(op.grid.nodes().data(), op.size());
    double worst = 0.0;
    for (double a : a_values) {
        if (!(std::abs(a) < m)) throw std::invalid_argument("symbol_error requires |a| < (N-2s)/2");
        const double symbol = power_symbol(params.N, params.s, m - a);
        const Eigen::VectorXd v = (a * kappa).array().exp();
        const Eigen::VectorXd image = op.apply_shifted(v);
        for (std::size_t i = 0; i < op.size(); ++i) {
            if (std::abs(kappa[i]) > window) continue;
            worst = std::max(worst, std::abs(image[i] / (symbol * v[i]) - 1.0));
        }
    }
    return worst;
}

double symbol_error(const Params& params, const LogGrid& grid, std::span<const double> a_values, double window) {
    return symbol_error(assemble_T(params, grid), a_values, window);
}

}  // namespace henon
