#pragma once

#include <array>
#include <functional>

#include "zml/field.hpp"

namespace zml {

struct MultiIndex {
    std::array<int, 2> components{0, 0};

    MultiIndex() = default;
    MultiIndex(int g0, int g1 = 0) : components{g0, g1} {
        if (g0 < 0 || g1 < 0) throw Error("MultiIndex: components must be nonnegative");
    }
    int order() const { return components[0] + components[1]; }
};

// Positively homogeneous Fourier symbol l(xi), degree beta > 0.
// Homogeneity and the realness condition l(-xi) = conj(l(xi)) are verified
// by sampling at construction.
class MultiplierSymbol {
  public:
    using Eval = std::function<Complex(double, double)>;

    MultiplierSymbol(double degree, Eval eval, int dim = 1);

    double degree() const { return degree_; }
    Complex operator()(double k0, double k1) const { return eval_(k0, k1); }

  private:
    double degree_;
    Eval eval_;
};

RealField heat_semigroup(const RealField& f, double t);
RealField partial_derivative(const RealField& f, const MultiIndex& gamma);
RealField fractional_derivative(const RealField& f, double beta);
RealField riesz_potential(const RealField& f, double beta);
RealField gauss_kernel(const GridSpec& grid, double t);
// Inverse transform of (i xi)^gamma |xi|^beta (2pi)^{-n/2} exp(-t |xi|^2);
// beta = 0 degenerates to the plain derivative of the heat kernel.
RealField self_similar_profile(const GridSpec& grid, double beta, const MultiIndex& gamma,
                               double t);
RealField multiplier_apply(const RealField& f, const MultiplierSymbol& symbol);
RealField advection_divergence(const RealField& f, const std::array<double, 2>& a);

// In-place spectral forms for the time steppers.
void apply_heat_multiplier(SpectralField& F, double t);
// i (a . xi), Nyquist modes zeroed (odd symbol)
void apply_advection_symbol(SpectralField& F, const std::array<double, 2>& a);

}  // namespace zml
