#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <vector>

#include "henon/discrete_operator.hpp"
#include "henon/solver.hpp"
#include "henon/transform.hpp"

namespace henon {

struct ContinuationOptions {
    double ds_initial = 0.05;
    double ds_max = 0.1;
    double ds_min = 1e-6;
    int max_newton = 12;
    int easy_newton = 3;       // a step is easy when the corrector needs at most this many iterations
    double tol = 1e-9;
    double sup_safety = 3.0;   // sup-norm bound is this times the value at s0
    double quad_tol = 1e-12;
    int restart_probes = 3;
    double restart_perturbation = 0.01;
    std::optional<std::filesystem::path> cache_dir;
};

struct BranchPoint {
    double s = 0.0;
    Profile Q;
    int morse_index_even = 0;
    double residual = 0.0;
    double sup_norm = 0.0;
    double min_value = 0.0;
    double decay_left = 0.0, decay_right = 0.0;
    double l2_norm = 0.0;
    double lp1_norm = 0.0;
    int newton_iters = 0;
};

struct RestartProbe {
    double s = 0.0;
    double distance = 0.0;
    int newton_iters = 0;
};

struct Branch {
    std::vector<BranchPoint> points;
    double sup_bound = 0.0;
    double sup_safety = 0.0;
    bool reached_end = false;
    double s_star = 0.0;               // last s reached
    double continuity_constant = 0.0;  // max ||Q_{k+1} - Q_k|| / ds
    std::vector<RestartProbe> probes;
};

class MonitorViolation : public std::runtime_error {
public:
    MonitorViolation(const std::string& what, BranchPoint point) : std::runtime_error(what), point(std::move(point)) {}
    BranchPoint point;
};

// Parameters on the fixed-p branch; alpha is the weight exponent that makes p critical at s.
Params branch_params(int N, double s, double p);

// Solutions of (T_s + A_s) Q = Q^p at fixed p for s from s0 to s_end.
Branch continue_branch(int N, double p, double s0, double s_end, const LogGrid& grid,
                       const ContinuationOptions& opts = {});

// ((p+1)A/2)^{1/(p-1)} sech^{2/(p-1)}((p-1) sqrt(A) kappa / 2), the solution of -Q'' + A Q = Q^p.
Profile endpoint_soliton(double p, double A, const LogGrid& grid, int N = 3);

// Corrector from `start` at fixed s; returns the converged profile values and iteration count.
std::pair<Eigen::VectorXd, int> correct(const OperatorMatrix& op, const Eigen::VectorXd& start, double tol,
                                        int max_newton);

void write_branch_csv(const Branch& branch, const std::filesystem::path& file);

}  // namespace henon
