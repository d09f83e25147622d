#include "henon/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace henon {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

Params Params::make(int N, double s, double alpha) {
    Params params{N, s, alpha, 0.0};
    params.p = critical_exponent(N, s, alpha);
    params.validate();
    return params;
}

Params Params::make(int N, double s, double alpha, double p) {
    Params params{N, s, alpha, p};
    params.validate();
    return params;
}

void Params::validate() const {
    if (N < 1) throw ParamsError("dimension N must be >= 1");
    if (!(s > 0.0 && s < 1.0)) throw ParamsError("fractional order s must lie in (0, 1)");
    if (!(N > 2.0 * s)) throw ParamsError("N > 2s is required");
    if (!admissible(N, s, alpha)) {
        std::ostringstream msg;
        msg << "alpha = " << alpha << " is not admissible for (N, s) = (" << N << ", " << s << ")";
        throw ParamsError(msg.str());
    }
    if (!(p > 1.0)) throw ParamsError("exponent p must exceed 1");
    if (s < 0.5 && !(p < one_dimensional_critical_power(s))) {
        std::ostringstream msg;
        msg << "p = " << p << " must be below (1+2s)/(1-2s) = " << one_dimensional_critical_power(s);
        throw ParamsError(msg.str());
    }
}

std::string Params::describe() const {
    std::ostringstream out;
    out.precision(17);
    out << "N=" << N << " s=" << s << " alpha=" << alpha << " p=" << p;
    return out.str();
}

double critical_exponent(int N, double s, double alpha) {
    return (N + 2.0 * s + 2.0 * alpha) / (N - 2.0 * s);
}

double critical_exponent(const Params& params) {
    return critical_exponent(params.N, params.s, params.alpha);
}

bool admissible(int N, double s, double alpha) {
    if (N < 1 || !(s > 0.0 && s <= 1.0) || !(N > 2.0 * s)) return false;
    if (!(alpha > -2.0 * s)) return false;
    if (s < 0.5) return alpha < 2.0 * s * (N - 1) / (1.0 - 2.0 * s);
    return true;
}

double one_dimensional_critical_power(double s) {
    if (s >= 0.5) return INFINITY;
    return (1.0 + 2.0 * s) / (1.0 - 2.0 * s);
}

double hardy_constant(int N, double s) {
    if (!(N > 2.0 * s) || !(s > 0.0 && s <= 1.0)) throw ParamsError("hardy_constant requires N > 2s, 0 < s <= 1");
    const double log_ratio = std::lgamma(0.25 * (N + 2.0 * s)) - std::lgamma(0.25 * (N - 2.0 * s));
    return std::exp(2.0 * s * std::log(2.0) + 2.0 * log_ratio);
}

double power_symbol(int N, double s, double mu) {
    if (!(mu > 0.0 && mu < N - 2.0 * s)) throw ParamsError("power_symbol requires 0 < mu < N - 2s");
    const double log_value = 2.0 * s * std::log(2.0) + std::lgamma(0.5 * (mu + 2.0 * s)) +
                             std::lgamma(0.5 * (N - mu)) - std::lgamma(0.5 * mu) -
                             std::lgamma(0.5 * (N - mu - 2.0 * s));
    return std::exp(log_value);
}

double normalization_constant(int N, double s) {
    if (N < 1 || !(s > 0.0 && s < 1.0)) throw ParamsError("normalization_constant requires N >= 1, 0 < s < 1");
    return s * std::pow(4.0, s) * std::exp(std::lgamma(0.5 * N + s) - std::lgamma(1.0 - s)) /
           std::pow(kPi, 0.5 * N);
}

double sphere_measure(int d) {
    if (d < 0) throw ParamsError("sphere dimension must be >= 0");
    const double half = 0.5 * (d + 1);
    return 2.0 * std::pow(kPi, half) / std::tgamma(half);
}

double kernel_singular_coefficient(int N, double s) {
    // Transversal integral of (t^2 + |w|^2)^{-(N+2s)/2} over R^{N-1}.
    return std::pow(kPi, 0.5 * (N - 1)) * std::exp(std::lgamma(0.5 + s) - std::lgamma(0.5 * N + s));
}

}  // namespace henon
