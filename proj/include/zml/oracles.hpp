#pragma once

#include <functional>
#include <string>
#include <vector>

#include "zml/field.hpp"
#include "zml/operators.hpp"

namespace zml {

// Quadrature against the standard Gaussian weight exp(-z^2).
struct QuadratureSpec {
    enum class Rule { gauss_hermite_like, trapezoid_refined };

    int node_count = 256;
    Rule rule = Rule::gauss_hermite_like;
    double truncation_radius = 8.0;  // spatial support bound for the datum

    void validate() const;
};

// Free-space 1d datum: samples are not enough for the Cole-Hopf integrals,
// so the oracle works with an evaluator and its running integral.
struct Profile1D {
    std::function<double(double)> value;      // u0(x)
    std::function<double(double)> primitive;  // V(x) = int_{-inf}^x u0
    double l1 = 0.0;
    double support_radius = 0.0;  // u0 == 0 outside [-R, R]
};

// Cubic Hermite interpolant of grid samples (slopes from the samples
// themselves since V' = u0); primitive by cumulative trapezoid.
Profile1D make_profile(const RealField& u0, double support_radius);

// d/dx of a Gaussian of mass m and width w; primitive is the Gaussian.
Profile1D dipole_profile(double mass, double width);

// Hopf-Cole solution of u_t - u_xx + a (u^2)_x = 0 on the line:
//   u(x,t) = e^{tD}(u0 w0) / e^{tD} w0,   w0 = exp(-a V),
// with e^{tD}f(x) = pi^{-1/2} int exp(-z^2) f(x + 2 sqrt(t) z) dz.
// Throws DenominatorBreach if the denominator dips below exp(-a ||u0||_1)
// by more than 1e-6 (under-resolved quadrature).
std::vector<double> cole_hopf_solution(const Profile1D& u0, double t,
                                       const std::vector<double>& x_points,
                                       const QuadratureSpec& spec, double a = 0.5);

// Linear control e^{tDelta} u0 by the same quadrature path selection as
// cole_hopf_solution, so differences u - e^{tDelta}u0 cancel quadrature
// bias instead of being dominated by it.
std::vector<double> heat_flow_solution(const Profile1D& u0, double t,
                                       const std::vector<double>& x_points,
                                       const QuadratureSpec& spec);

// Convergence gate: relative change under doubling node_count.
double cole_hopf_refinement_delta(const Profile1D& u0, double t,
                                  const std::vector<double>& x_points,
                                  const QuadratureSpec& spec, double a = 0.5);

struct HeatExactParams {
    GridSpec grid{1, 40.0, 1024};
    double s = 1.0;          // variance parameter of the initial family member
    double amplitude = 1.0;
    double beta = 0.5;       // fractional_profile only
    MultiIndex gamma{};      // gaussian_derivative: which derivative
};

// Closed-form e^{tDelta} of the listed families, kind in
// {"gaussian", "gaussian_derivative", "fractional_profile"}.
RealField heat_exact(const std::string& kind, const HeatExactParams& params, double t);

// C(beta,1) = Gamma((1-beta)/2) / (2^beta sqrt(pi) Gamma(beta/2))
double riesz_constant(double beta);

// Real-space convolution C(beta,1) int |x-y|^{beta-1} u0(y) dy on the
// periodic 1d grid: exact piecewise-linear quadrature via antiderivative
// tables, periodic images summed with an integral tail correction, output
// mean removed to match the spectral zero-mode convention.
RealField riesz_kernel_oracle(const RealField& u0, double beta);

// Gaussian-weight quadrature nodes/weights for int exp(-z^2) f(z) dz.
void gauss_hermite_nodes(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace zml
