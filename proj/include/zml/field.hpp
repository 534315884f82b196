#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "zml/grid.hpp"

namespace zml {

using Complex = std::complex<double>;

// Sampled real-valued function on the grid, lexicographic order.
struct RealField {
    GridSpec grid;
    std::vector<double> values;

    explicit RealField(const GridSpec& g) : grid(g), values(g.size(), 0.0) {}
    RealField(const GridSpec& g, std::vector<double> v);

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

// Discrete Fourier coefficients under the symmetric (2pi)^{-n/2} convention:
//   uhat(xi_k) = (2pi)^{-n/2} h^n sum_j exp(-i x_j . xi_k) u(x_j)
struct SpectralField {
    GridSpec grid;
    std::vector<Complex> coeffs;

    explicit SpectralField(const GridSpec& g) : grid(g), coeffs(g.size(), Complex{}) {}

    Complex& operator[](std::size_t i) { return coeffs[i]; }
    Complex operator[](std::size_t i) const { return coeffs[i]; }

    // max_k |uhat(-xi_k) - conj(uhat(xi_k))| / max_k |uhat|, 0 for the zero field
    double hermitian_defect() const;
};

// Projection onto the Hermitian part, (uhat(xi) + conj(uhat(-xi)))/2.
// Use before inverse_transform on near-cancelled differences, whose
// round-off defect is inherited from the operands rather than scaled to
// the difference itself.
void symmetrize(SpectralField& F);

SpectralField forward_transform(const RealField& f);
// Throws SymmetryViolation if the Hermitian defect exceeds 1e-8 relative.
RealField inverse_transform(const SpectralField& F);

// h^n sum_j f(x_j); equals (2pi)^{n/2} uhat(0) to round-off.
double integrate(const RealField& f);

// (h^n sum |f|^p)^{1/p} for finite p, max|f| for p = inf.
double lp_norm(const RealField& f, double p);

RealField sample(const GridSpec& g, const std::function<double(double, double)>& fn);
RealField sample(const GridSpec& g, const std::function<double(double)>& fn);  // n=1

// Anti-aliased pointwise evaluation: spectrally interpolate f onto a
// factor-times finer grid, apply phi, truncate back.
RealField pad_pointwise_apply(const RealField& f, const std::function<double(double)>& phi,
                              int factor = 2);

// Zero-padding to a factor-times finer grid and its adjoint truncation.
// The unpaired Nyquist coefficient is split over +-N/2 so both maps
// preserve realness and compose to the identity.
SpectralField pad_embed(const SpectralField& F, int factor);
SpectralField pad_restrict(const SpectralField& F, const GridSpec& coarse);

// arithmetic on matching grids
RealField operator+(const RealField& a, const RealField& b);
RealField operator-(const RealField& a, const RealField& b);
RealField operator*(double c, const RealField& f);

}  // namespace zml
