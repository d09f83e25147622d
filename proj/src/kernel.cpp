#include "henon/kernel.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace henon {

namespace {

using boost::math::quadrature::gauss;

constexpr int kMaxDepth = 40;

struct Panel {
    double value;
    double error;
};

// Gauss-Legendre 30 with the 15-point rule as error estimate.
Panel gauss_panel(const std::function<double(double)>& f, double a, double b) {
    const double fine = gauss<double, 30>::integrate(f, a, b);
    const double coarse = gauss<double, 15>::integrate(f, a, b);
    if (!std::isfinite(fine)) throw QuadratureError("quadrature produced a non-finite value");
    return {fine, std::abs(fine - coarse)};
}

double bisect(const std::function<double(double)>& f, double a, double b, double abs_tol, int depth) {
    const Panel panel = gauss_panel(f, a, b);
    if (panel.error <= abs_tol || panel.error <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(panel.value)) {
        return panel.value;
    }
    if (depth >= kMaxDepth) {
        std::ostringstream msg;
        msg << "quadrature did not converge on [" << a << ", " << b << "]: error " << panel.error;
        throw QuadratureError(msg.str());
    }
    const double mid = 0.5 * (a + b);
    return bisect(f, a, mid, 0.5 * abs_tol, depth + 1) + bisect(f, mid, b, 0.5 * abs_tol, depth + 1);
}

// Adaptive bisection; tolerance is relative to the first-panel magnitude, or to
// `scale` when the integrand is a cancellation remainder.
double integrate_piece(const std::function<double(double)>& f, double a, double b, double tol,
                       double scale = 0.0) {
    const Panel first = gauss_panel(f, a, b);
    const double abs_tol = tol * std::max({std::abs(first.value), scale, 1e-300});
    if (first.error <= abs_tol) return first.value;
    const double mid = 0.5 * (a + b);
    return bisect(f, a, mid, 0.5 * abs_tol, 1) + bisect(f, mid, b, 0.5 * abs_tol, 1);
}

// Angular integral for N >= 2, scaled by (4 sinh^2(t/2))^{q}.
double angular_integral(int N, double q, double t, double tol) {
    const double sh = std::sinh(0.5 * t);
    const double inv_sh2 = 1.0 / (sh * sh);
    const int power = N - 2;
    auto integrand = [=](double theta) {
        const double half = std::sin(0.5 * theta);
        const double base = 1.0 + half * half * inv_sh2;
        const double weight = power == 0 ? 1.0 : std::pow(std::sin(theta), power);
        return weight * std::pow(base, -q);
    };
    // The integrand has width ~t around theta = 0; geometric breakpoints resolve it.
    double total = 0.0;
    double a = 0.0;
    double b = std::min(std::numbers::pi, 4.0 * t);
    while (true) {
        total += integrate_piece(integrand, a, b, tol);
        if (b >= std::numbers::pi) break;
        a = b;
        b = std::min(std::numbers::pi, 4.0 * b);
    }
    return total;
}

}  // namespace

double kernel_value(const Params& params, double t, double tol) {
    if (t == 0.0) throw std::domain_error("kernel_value: K is singular at t = 0");
    t = std::abs(t);
    const double q = 0.5 * (params.N + 2.0 * params.s);
    const double sh = std::sinh(0.5 * t);
    const double log_scale = -q * std::log(4.0 * sh * sh);
    if (params.N == 1) {
        // Sphere {+1, -1}: (2 cosh t - 2)^{-q} + (2 cosh t + 2)^{-q}.
        const double ch = std::cosh(0.5 * t);
        return std::exp(log_scale) + std::pow(4.0 * ch * ch, -q);
    }
    const double omega = sphere_measure(params.N - 2);
    return omega * std::exp(log_scale) * angular_integral(params.N, q, t, tol);
}

std::size_t required_table_length(const Params& params, const LogGrid& grid) {
    const double q = 0.5 * (params.N + 2.0 * params.s);
    const double tail = 40.0 / q;
    return (grid.size() - 1) + static_cast<std::size_t>(std::ceil(tail / grid.spacing()));
}

SingularFit fit_singular_coefficient(const Params& params, double h, double tol) {
    constexpr int kSamples = 17;
    const double exponent = 1.0 + 2.0 * params.s;
    // y = K(t) t^{1+2s} = c + b t^2 + d t^{1+2s}; the last column is dropped when it
    // coincides with t^2.
    const bool distinct = std::abs(exponent - 2.0) > 0.05;
    const int columns = distinct ? 3 : 2;
    Eigen::MatrixXd design(kSamples, columns);
    Eigen::VectorXd ys(kSamples), logt(kSamples), logk(kSamples);
    for (int k = 0; k < kSamples; ++k) {
        const double t = h * std::pow(2.0, -4.0 + 4.0 * k / (kSamples - 1));
        const double value = kernel_value(params, t, tol);
        ys[k] = value * std::pow(t, exponent);
        logt[k] = std::log(t);
        logk[k] = std::log(value);
        design(k, 0) = 1.0;
        design(k, 1) = t * t;
        if (distinct) design(k, 2) = std::pow(t, exponent);
    }
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(ys);
    const double residual = ((design * coef - ys).cwiseAbs() / std::abs(coef[0])).maxCoeff();

    const double mean_x = logt.mean();
    const double mean_y = logk.mean();
    const double slope = ((logt.array() - mean_x) * (logk.array() - mean_y)).sum() /
                         (logt.array() - mean_x).square().sum();
    return {coef[0], residual, slope};
}

KernelTable kernel_table(const Params& params, double h, std::size_t length, double tol) {
    if (!(h > 0.0) || length == 0) throw std::invalid_argument("kernel_table: need h > 0 and length > 0");
    KernelTable table;
    table.N = params.N;
    table.s = params.s;
    table.h = h;
    table.quad_tol = tol;
    table.values.resize(length);
    for (std::size_t j = 1; j <= length; ++j) table.values[j - 1] = kernel_value(params, j * h, tol);
    const SingularFit fit = fit_singular_coefficient(params, h, tol);
    table.sing_coeff = fit.coeff;
    table.fit_residual = fit.residual;
    table.tail_coeff = sphere_measure(params.N - 1);
    return table;
}

KernelTable kernel_table(const Params& params, const LogGrid& grid, double tol) {
    return kernel_table(params, grid.spacing(), required_table_length(params, grid), tol);
}

double A_via_integral(const Params& params, double tol) {
    const int N = params.N;
    const double s = params.s;
    const double m = params.decay_rate();
    const double inner_tol = std::min(1e-12, 1e-2 * tol);
    const double c0 = kernel_singular_coefficient(N, s);
    const double lead = 0.5 * m * m * c0;
    auto weight = [m](double t) {
        const double sh = std::sinh(0.5 * m * t);
        return 2.0 * sh * sh;  // cosh(m t) - 1 without cancellation
    };
    // On (0, 1] subtract the leading t^{1-2s} behavior and add it back exactly.
    auto near = [&](double t) {
        return weight(t) * kernel_value(params, t, inner_tol) - lead * std::pow(t, 1.0 - 2.0 * s);
    };
    auto far = [&](double t) { return weight(t) * kernel_value(params, t, inner_tol); };

    double total = lead / (2.0 - 2.0 * s);
    // Below 2^-24 the subtracted integrand is O(t^{3-2s}) and negligible.
    double b = 1.0;
    for (int k = 0; k < 24; ++k) {
        const double a = 0.5 * b;
        total += integrate_piece(near, a, b, tol, std::abs(lead));
        b = a;
    }
    // Integrand decays like e^{-2 s t}.
    const double t_end = 46.0 / (2.0 * s) + 1.0;
    double a = 1.0;
    while (a < t_end) {
        const double next = std::min(t_end, 2.0 * a);
        total += integrate_piece(far, a, next, tol);
        a = next;
    }
    return 2.0 * normalization_constant(N, s) * total;
}

std::filesystem::path kernel_cache_path(const std::filesystem::path& dir, int N, double s, double h,
                                        std::size_t length, double tol) {
    std::ostringstream key;
    key << std::hexfloat << N << '|' << s << '|' << h << '|' << length << '|' << tol;
    const std::size_t digest = std::hash<std::string>{}(key.str());
    std::ostringstream name;
    name << "kernel_N" << N << "_" << std::hex << digest << ".txt";
    return dir / name.str();
}

void save_kernel_table(const KernelTable& table, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write kernel cache " + file.string());
    out << "# henon-lab kernel table\n";
    out << std::hexfloat;
    out << "# N=" << table.N << "\n# s=" << table.s << "\n# h=" << table.h << "\n# J=" << table.length()
        << "\n# tol=" << table.quad_tol << "\n# sing_coeff=" << table.sing_coeff
        << "\n# fit_residual=" << table.fit_residual << "\n# tail_coeff=" << table.tail_coeff << "\n";
    for (double v : table.values) out << v << "\n";
}

namespace {

bool read_field(std::istream& in, const std::string& name, std::string& value) {
    std::string line;
    if (!std::getline(in, line)) return false;
    const std::string prefix = "# " + name + "=";
    if (line.rfind(prefix, 0) != 0) return false;
    value = line.substr(prefix.size());
    return true;
}

double parse_hex(const std::string& text) { return std::strtod(text.c_str(), nullptr); }

}  // namespace

std::optional<KernelTable> load_kernel_table(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line) || line != "# henon-lab kernel table") return std::nullopt;
    KernelTable table;
    std::string value;
    if (!read_field(in, "N", value)) return std::nullopt;
    table.N = std::stoi(value);
    if (!read_field(in, "s", value)) return std::nullopt;
    table.s = parse_hex(value);
    if (!read_field(in, "h", value)) return std::nullopt;
    table.h = parse_hex(value);
    if (!read_field(in, "J", value)) return std::nullopt;
    const std::size_t length = std::stoul(value);
    if (!read_field(in, "tol", value)) return std::nullopt;
    table.quad_tol = parse_hex(value);
    if (!read_field(in, "sing_coeff", value)) return std::nullopt;
    table.sing_coeff = parse_hex(value);
    if (!read_field(in, "fit_residual", value)) return std::nullopt;
    table.fit_residual = parse_hex(value);
    if (!read_field(in, "tail_coeff", value)) return std::nullopt;
    table.tail_coeff = parse_hex(value);
    table.values.reserve(length);
    while (std::getline(in, line) && table.values.size() < length) table.values.push_back(parse_hex(line));
    if (table.values.size() != length) return std::nullopt;
    return table;
}

KernelTable cached_kernel_table(const Params& params, const LogGrid& grid, double tol,
                                const std::optional<std::filesystem::path>& cache_dir) {
    const std::size_t length = required_table_length(params, grid);
    if (!cache_dir) return kernel_table(params, grid.spacing(), length, tol);
    const auto file = kernel_cache_path(*cache_dir, params.N, params.s, grid.spacing(), length, tol);
    if (auto cached = load_kernel_table(file)) {
        if (cached->N == params.N && cached->s == params.s && cached->h == grid.spacing() &&
            cached->quad_tol == tol && cached->length() == length) {
            return *cached;
        }
    }
    KernelTable table = kernel_table(params, grid.spacing(), length, tol);
    std::filesystem::create_directories(*cache_dir);
    save_kernel_table(table, file);
    return table;
}

}  // namespace henon
