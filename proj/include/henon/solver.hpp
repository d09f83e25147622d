#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>

#include "henon/discrete_operator.hpp"
#include "henon/transform.hpp"

namespace henon {

struct SolveOptions {
    double tol = 1e-9;        // relative residual target
    int max_newton = 50;
    int max_flow = 20000;
    double flow_stagnation = 1e-10;
    double quad_tol = 1e-12;
};

class SolveError : public std::runtime_error {
public:
    SolveError(const std::string& what, std::string diagnostics)
        : std::runtime_error(what), diagnostics(std::move(diagnostics)) {}
    std::string diagnostics;
};

struct GroundState {
    Profile profile;
    double residual = 0.0;
    double energy = 0.0;
    int flow_iterations = 0;
    int newton_iterations = 0;
};

// Even functions on a LogGrid stored as their values on kappa >= 0 (center first).
// Restricted matrices act as B_e = D^{-1} E^T B E with D = diag(1, 2, ..., 2).
struct EvenReduction {
    std::size_t center;
    std::size_t size;  // center + 1

    explicit EvenReduction(const LogGrid& grid) : center(grid.center()), size(grid.center() + 1) {}

    Eigen::VectorXd restrict(const Eigen::VectorXd& full) const { return full.tail(size); }
    Eigen::VectorXd expand(const Eigen::VectorXd& half) const;
    // B_e (not symmetric) from a symmetric reflection-invariant full matrix.
    Eigen::MatrixXd matrix(const Eigen::MatrixXd& full) const;
    // Quadrature weights D, so that h * sum D_j u_j v_j is the full inner product.
    Eigen::VectorXd weights() const;
};

// u_+^q elementwise.
Eigen::VectorXd positive_power(const Eigen::VectorXd& v, double q);

// sech^{2/(p-1)}((p-1) m kappa / 2) with m = (N-2s)/2.
Eigen::VectorXd initial_guess(const Params& params, const LogGrid& grid);

// J(v) = 1/2 <v, (T+A) v> - 1/(p+1) sum h v_+^{p+1}.
double energy(const OperatorMatrix& op, double p, const Eigen::VectorXd& v);
// Representation of J'(v) in the h-weighted inner product: (T+A) v - v_+^p.
Eigen::VectorXd energy_gradient(const OperatorMatrix& op, double p, const Eigen::VectorXd& v);

// t* with t* v on the Nehari manifold; throws SolveError if either form is nonpositive.
double nehari_factor(const OperatorMatrix& op, double p, const Eigen::VectorXd& v);
Profile nehari_scale(const Profile& profile, const OperatorMatrix& op, double p);

// ||(T+A) v - v^p|| / ||v^p|| in the h-weighted L2 norm (absolute when v^p = 0).
double residual_norm(const OperatorMatrix& op, double p, const Eigen::VectorXd& v);
double residual_norm(const Profile& profile, const OperatorMatrix& op, double p);

// Newton on the even subspace from `start`; returns the iterate and the iteration count.
std::pair<Eigen::VectorXd, int> newton_even(const OperatorMatrix& op, double p, const Eigen::VectorXd& start,
                                            const SolveOptions& opts);

// Throws SolveError unless v is strictly positive, peaked at the center and non-increasing on kappa > 0.
void check_ground_state(const LogGrid& grid, const Eigen::VectorXd& v);

GroundState solve_ground_state(const OperatorMatrix& op, const SolveOptions& opts = {},
                               const std::optional<Eigen::VectorXd>& start = std::nullopt);
GroundState solve_ground_state(const Params& params, const LogGrid& grid, const SolveOptions& opts = {});

}  // namespace henon
