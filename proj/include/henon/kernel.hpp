#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <vector>

#include "henon/grid.hpp"
#include "henon/params.hpp"

namespace henon {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Angular kernel K(t) of the transformed operator, evaluated to relative
// accuracy `tol`. K is even; t = 0 is rejected.
//
// Uses 1 + e^{-2t} - 2 e^{-t} u = e^{-t} (4 sinh^2(t/2) + 2(1 - u)), so that
// K(t) = omega_{N-2} int_0^pi sin^{N-2}(th) (4 sinh^2(t/2) + 4 sin^2(th/2))^{-(N+2s)/2} dth
// for N >= 2, and the two-point sphere sum for N = 1.
double kernel_value(const Params& params, double t, double tol = 1e-12);

// Sampled kernel K(j h), j = 1..J, with near-diagonal and tail coefficients.
struct KernelTable {
    int N = 0;
    double s = 0.0;
    double h = 0.0;
    double quad_tol = 0.0;
    std::vector<double> values;  // values[j-1] = K(j h)
    double sing_coeff = 0.0;     // fitted c with K(t) ~ c t^{-1-2s}
    double fit_residual = 0.0;   // max relative residual of the near-zero fit
    double tail_coeff = 0.0;     // omega_{N-1}, K(t) ~ omega_{N-1} e^{-t(N+2s)/2}

    std::size_t length() const { return values.size(); }
    double at(std::size_t j) const { return values.at(j - 1); }
};

// Table length needed so that assembly on `grid` neglects only kernel mass
// below e^{-40}.
std::size_t required_table_length(const Params& params, const LogGrid& grid);

// Builds the table for spacing grid.spacing() and length required_table_length.
// A large fit_residual marks quadrature trouble near the singularity; operator
// assembly checks it and switches to its fallback near-diagonal rule.
KernelTable kernel_table(const Params& params, const LogGrid& grid, double tol = 1e-12);
KernelTable kernel_table(const Params& params, double h, std::size_t length, double tol = 1e-12);

// Regression of K(t) t^{1+2s} = c + b t^2 on log-spaced t in [h/16, h].
struct SingularFit {
    double coeff;
    double residual;
    double loglog_slope;  // slope of log K vs log t over the same range
};
SingularFit fit_singular_coefficient(const Params& params, double h, double tol = 1e-12);

// A_{s,N} computed from its integral definition,
// C_{N,s} int_R (cosh(m t) - 1) K(t) dt with m = (N-2s)/2.
double A_via_integral(const Params& params, double tol = 1e-10);

// Cache: text header with the five key fields, then hex-float values.
void save_kernel_table(const KernelTable& table, const std::filesystem::path& file);
std::optional<KernelTable> load_kernel_table(const std::filesystem::path& file);
std::filesystem::path kernel_cache_path(const std::filesystem::path& dir, int N, double s, double h,
                                        std::size_t length, double tol);

// kernel_table with an optional on-disk cache directory.
KernelTable cached_kernel_table(const Params& params, const LogGrid& grid, double tol,
                                const std::optional<std::filesystem::path>& cache_dir);

}  // namespace henon
