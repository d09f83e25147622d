#pragma once

#include <stdexcept>
#include <string>

namespace henon {

// Thrown when problem data violates the standing assumptions.
class ParamsError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Problem data (N, s, alpha, p) for the critical fractional Henon problem.
//
// The weight exponent alpha only enters the transformed problem through the
// exponent p; when p is not given explicitly it defaults to the critical
// value (N + 2s + 2 alpha) / (N - 2s).
struct Params {
    int N = 3;
    double s = 0.5;
    double alpha = 0.0;
    double p = 0.0;

    // Builds and validates; throws ParamsError on violation.
    static Params make(int N, double s, double alpha = 0.0);
    static Params make(int N, double s, double alpha, double p);

    // (N - 2s) / 2, the log-variable decay rate of every profile of interest.
    double decay_rate() const { return 0.5 * (N - 2.0 * s); }

    void validate() const;
    std::string describe() const;
};

double critical_exponent(const Params& params);
double critical_exponent(int N, double s, double alpha);

// Standing assumptions: N > 2s, alpha > -2s, and alpha < 2s(N-1)/(1-2s) when s < 1/2.
bool admissible(int N, double s, double alpha);

// Sharp fractional Hardy constant 2^{2s} Gamma^2((N+2s)/4) / Gamma^2((N-2s)/4).
// Accepts s = 1 (local limit ((N-2)/2)^2).
double hardy_constant(int N, double s);

// Eigenvalue of (-Delta)^s on |x|^{-mu}, 0 < mu < N - 2s.
double power_symbol(int N, double s, double mu);

// C_{N,s} in the normalization with Fourier symbol |xi|^{2s}.
double normalization_constant(int N, double s);

// Surface measure of the unit sphere S^{d} in R^{d+1}; sphere_measure(0) = 2.
double sphere_measure(int d);

// Coefficient c with K(t) ~ c |t|^{-1-2s} as t -> 0.
double kernel_singular_coefficient(int N, double s);

// Largest p for which the transformed problem is subcritical in one dimension.
double one_dimensional_critical_power(double s);

}  // namespace henon
