#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "henon/params.hpp"

namespace henon {

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string experiment = "constants";
    int N = 3;
    double s = 0.5;
    double alpha = 0.0;
    std::optional<double> p;
    double L = 18.0;
    int M = 2001;
    double quad_tol = 1e-12;
    double solve_tol = 1e-9;
    double eig_tol = 1.0;  // zero-mode constant C
    double s_end = 0.999;
    double ds_max = 0.1;
    double dp = 1e-3;
    double kappa_star = 1.0;
    std::filesystem::path out = "henon_run";
    std::optional<std::filesystem::path> cache_dir;

    Params params() const;
    void validate() const;
};

// Reads a JSON config; unknown keys are rejected.
RunConfig load_config(const std::filesystem::path& file);
std::string config_json(const RunConfig& config);

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;  // "<", "<=", ">", "==" against threshold
    bool pass = false;
};

Check make_check(std::string name, double value, std::string relation, double threshold);
void write_checks(const std::vector<Check>& checks, const std::filesystem::path& file);
std::vector<Check> read_checks(const std::filesystem::path& file);

// Runs config.experiment, writing artifacts and a manifest into config.out.
// Returns the process exit status: 0 when every check passed.
int run_experiment(const RunConfig& config);

struct ReportSummary {
    int total = 0;
    int failed = 0;
    std::vector<std::string> missing;
    std::vector<std::string> warnings;
};

// Aggregates every *_checks.csv in dir into summary.md and summary.csv.
ReportSummary write_report(const std::filesystem::path& dir);

// {"error": {"type": ..., "message": ...}}
std::string error_json(const std::string& type, const std::string& message);

}  // namespace henon
