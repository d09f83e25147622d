#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <vector>

#include "henon/discrete_operator.hpp"
#include "henon/solver.hpp"
#include "henon/transform.hpp"

namespace henon {

struct Eigenpair {
    double value = 0.0;
    Parity parity = Parity::Even;
    int sign_changes = 0;         // on kappa > 0
    int radial_sign_changes = 0;  // on r > 0, i.e. the whole kappa line
    bool zero_mode = false;
    bool discrete = false;        // below the essential edge minus the margin
    Eigen::VectorXd vector;       // full grid, unit h-weighted norm
};

struct SpectrumOptions {
    int k = 6;                       // eigenpairs kept per parity
    double essential_margin = 0.05;  // relative to A
    double zero_mode_constant = 1.0; // C in C (h^2 + e^{-(N-2s)L/2})
    double deadband = 1e-9;
};

struct SpectrumReport {
    Params params;
    LogGrid grid;
    double essential_edge = 0.0;
    double zero_tol = 0.0;
    double deadband = 0.0;
    std::vector<Eigenpair> even{}, odd{};  // ascending
    int morse_index_full = 0;
    int morse_index_even = 0;
    bool morse_indeterminate = false;

    double lambda1() const { return even.front().value; }
    // Odd eigenpair of smallest magnitude.
    const Eigenpair& odd_zero_mode() const;
};

// T + A I - p diag(Q^{p-1}); the potential is stored in the entries.
OperatorMatrix assemble_linearized(const OperatorMatrix& op, const Eigen::VectorXd& Q, double p);

// Strict sign alternations between samples whose magnitude exceeds deadband * max|v|.
int sign_changes(std::span<const double> values, double deadband = 1e-9);
int half_line_sign_changes(const LogGrid& grid, const Eigen::VectorXd& v, double deadband = 1e-9);

SpectrumReport parity_spectrum(const OperatorMatrix& linearized, const SpectrumOptions& opts = {});

// Eigenvalues of the even block only, ascending.
Eigen::VectorXd even_eigenvalues(const OperatorMatrix& linearized);

struct MorseCount {
    int count = 0;
    bool indeterminate = false;
};
MorseCount morse_index(const SpectrumReport& report, double tol);
MorseCount morse_index(const SpectrumReport& report);

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct DpInvariant {
    double residual = 0.0;           // ||L v - Q^p ln Q|| / ||Q^p ln Q||
    double kappa_star = 0.0;
    double q_star = 0.0;
    int w_sign_changes = 0;          // on kappa > 0
    bool w_nonnegative_first = false;
    double w_identity_residual = 0.0; // w against L((p-1)/ln Q* v + Q)
    Eigen::VectorXd v, w;
};

// Central p-derivative of the ground state against the differentiated equation, and the
// comparison function w = (p-1)(ln Q / ln Q(kappa*) - 1) Q^p.
DpInvariant dp_invariant_check(const Params& params, const LogGrid& grid, double dp, double kappa_star = 1.0,
                               const SolveOptions& opts = {});

struct SingularEigenpair {
    double value = 0.0;
    Parity parity = Parity::Even;
    Profile eigenfunction;
};

struct SingularReport {
    std::vector<SingularEigenpair> pairs;  // ascending over both parities
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double hardy = 0.0;
    bool lambda2_below_hardy = false;
    double margin = 0.0;  // A - lambda2
};

// Eigenpairs relabelled as singular eigenpairs of (-Delta)^s + V with weight |x|^{-2s}.
SingularReport singular_map(const SpectrumReport& report, const Params& params);

void write_spectrum_csv(const SpectrumReport& report, const std::filesystem::path& file);
void write_spectrum_json(const SpectrumReport& report, const std::filesystem::path& file);

}  // namespace henon
