#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <functional>
#include <string>
#include <utility>

#include "henon/grid.hpp"
#include "henon/params.hpp"

namespace henon {

enum class Variable { Log, Radial };
enum class Parity { None, Even, Odd };

std::string to_string(Variable v);
std::string to_string(Parity p);

// Samples on a LogGrid. Radial profiles live on the nodes r_i = exp(kappa_i).
struct Profile {
    LogGrid grid;
    Params params;
    Eigen::VectorXd values;
    Variable variable = Variable::Log;
    Parity parity = Parity::None;

    std::size_t size() const { return grid.size(); }
    double coordinate(std::size_t i) const;
    Eigen::VectorXd coordinates() const;
};

// Samples f at the coordinates of the requested variable.
Profile sample_profile(const Params& params, const LogGrid& grid, Variable variable,
                       const std::function<double(double)>& f);

// Max |v(kappa) -/+ v(-kappa)| / max|v|.
double parity_defect(const Eigen::VectorXd& values, Parity parity);
// Sets the tag after checking the reflection defect is below tol; throws std::invalid_argument otherwise.
void set_parity(Profile& profile, Parity parity, double tol = 1e-12);

// U(r) -> e^{kappa (N-2s)/2} U(e^kappa)
Profile to_log_profile(const Profile& radial);
// v(kappa) -> r^{-(N-2s)/2} v(ln r)
Profile from_log_profile(const Profile& log);

// Fourth-order central differences (one-sided near the ends) in kappa.
Eigen::VectorXd derivative(const LogGrid& grid, const Eigen::VectorXd& values);

inline constexpr double kMaxDifferentiationSpacing = 0.1;

// z = (N-2s)/2 U + r U', computed as the back-transform of the log derivative.
Profile generator_z(const Profile& radial);
// Same quantity through r U' directly.
Profile generator_z_direct(const Profile& radial);

// Least-squares slopes of -log|v| against |kappa| on the windows
// |kappa| in [L - offset - width, L - offset] on each side.
std::pair<double, double> decay_rate_fit(const Profile& log, double width = 4.0, double offset = 2.0);

void write_profile_csv(const Profile& profile, const std::filesystem::path& file);
Profile read_profile_csv(const std::filesystem::path& file);

}  // namespace henon
