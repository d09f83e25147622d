#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

#include "henon/grid.hpp"
#include "henon/kernel.hpp"
#include "henon/params.hpp"

namespace henon {

// Near-diagonal treatment actually used by an assembly.
enum class NearDiagonalRule {
    // Trapezoid on K(jh) plus a first-neighbour zeta correction built from the
    // fitted |t|^{-1-2s} coefficient.
    CorrectedTrapezoid,
    // Local quadratic interpolant integrated against K on |t| <= h, trapezoid beyond.
    QuadraticFallback,
};

// Dense symmetric discretization of T_s on a LogGrid.
//
// Outside [-L, L] functions are continued exponentially at rate m, extrapolated from the
// row's own node, which only adds to the diagonal. The matrix is exactly symmetric,
// diagonally dominant and commutes exactly with the grid reflection.
struct OperatorMatrix {
    LogGrid grid;
    Params params;
    double decay_rate = 0.0;   // closure rate m
    double hardy_shift = 0.0;  // A_{s,N}
    NearDiagonalRule rule = NearDiagonalRule::CorrectedTrapezoid;
    Eigen::MatrixXd entries;   // T_s only

    std::size_t size() const { return grid.size(); }
    double spacing() const { return grid.spacing(); }

    Eigen::VectorXd apply(const Eigen::VectorXd& v) const { return entries * v; }
    // (T_s + A) v
    Eigen::VectorXd apply_shifted(const Eigen::VectorXd& v) const { return entries * v + hardy_shift * v; }
    // T_s + A I as a dense matrix.
    Eigen::MatrixXd shifted() const;
};

// Fit residual above which the quadratic fallback replaces the corrected trapezoid.
inline constexpr double kFitResidualThreshold = 1e-3;

// Translation-invariant weights w_k (k = 1..J) with
// (T v)_i = sum_{j != i} w_{|i-j|} (v_i - v_j) on the infinite grid. Includes C_{N,s}.
std::vector<double> operator_weights(const Params& params, const KernelTable& table, NearDiagonalRule rule);

// Assembles T_s. decay_rate defaults to (N - 2s)/2. Throws std::invalid_argument when
// the table spacing does not match the grid or the table is too short.
OperatorMatrix assemble_T(const Params& params, const LogGrid& grid, const KernelTable& table,
                          std::optional<double> decay_rate = std::nullopt);

// Convenience: builds the kernel table internally.
OperatorMatrix assemble_T(const Params& params, const LogGrid& grid, double quad_tol = 1e-12);

// h-weighted <v, (T + A + diag(potential)) v>. An empty potential means zero.
double rayleigh_form(const OperatorMatrix& op, const Eigen::VectorXd& potential, const Eigen::VectorXd& v);

// Max over a_values of the central-window relative error of (T + A) e^{a kappa}
// against power_symbol(N, s, (N-2s)/2 - a) e^{a kappa}.
double symbol_error(const OperatorMatrix& op, std::span<const double> a_values, double window = 2.0);
double symbol_error(const Params& params, const LogGrid& grid, std::span<const double> a_values,
                    double window = 2.0);

// Discrete L2 inner product and norm with weight h.
double inner(const LogGrid& grid, const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double l2_norm(const LogGrid& grid, const Eigen::VectorXd& v);

}  // namespace henon
