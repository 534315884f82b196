#include "zml/operators.hpp"

#include <cmath>

namespace zml {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

// Visit every coefficient with its wavevector; fn may mutate it.
template <typename Fn>
void for_each_mode(SpectralField& F, Fn&& fn) {
    const GridSpec& g = F.grid;
    const int N = g.points_per_dim;
    if (g.dim == 1) {
        for (int i = 0; i < N; ++i) fn(F.coeffs[i], g.wavenumber(i), 0.0, g.is_nyquist(i), false);
    } else {
        std::size_t flat = 0;
        for (int i0 = 0; i0 < N; ++i0)
            for (int i1 = 0; i1 < N; ++i1)
                fn(F.coeffs[flat++], g.wavenumber(i0), g.wavenumber(i1), g.is_nyquist(i0),
                   g.is_nyquist(i1));
    }
}

Complex ipow(Complex base, int e) {
    Complex r{1.0, 0.0};
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

MultiplierSymbol::MultiplierSymbol(double degree, Eval eval, int dim)
    : degree_(degree), eval_(std::move(eval)) {
    if (!(degree > 0.0)) throw InvalidBeta("MultiplierSymbol: degree must be positive");
    // deterministic sample directions, a few magnitudes each
    const double dirs[][2] = {{1.0, 0.0},   {-1.0, 0.0}, {0.3, 0.0},  {0.0, 1.0},
                              {0.7, -0.4},  {-1.3, 2.1}, {2.0, 0.5},  {0.11, 0.0}};
    const double scale = std::pow(2.0, degree);
    for (const auto& d : dirs) {
        double k0 = d[0], k1 = dim == 1 ? 0.0 : d[1];
        if (dim == 1 && d[0] == 0.0) continue;
        Complex v = eval_(k0, k1);
        Complex v2 = eval_(2.0 * k0, 2.0 * k1);
        if (std::abs(v2 - scale * v) > 1e-10 * std::max(1e-300, std::abs(v)))
            throw Error("MultiplierSymbol: symbol is not homogeneous of the declared degree");
        Complex vm = eval_(-k0, -k1);
        if (std::abs(vm - std::conj(v)) > 1e-10 * std::max(1e-300, std::abs(v)))
            throw SymmetryViolation("MultiplierSymbol: l(-xi) != conj(l(xi))");
    }
}

RealField heat_semigroup(const RealField& f, double t) {
    if (t < 0.0) throw NegativeTime("heat_semigroup: t must be >= 0");
    SpectralField F = forward_transform(f);
    apply_heat_multiplier(F, t);
    return inverse_transform(F);
}

void apply_heat_multiplier(SpectralField& F, double t) {
    for_each_mode(F, [t](Complex& c, double k0, double k1, bool, bool) {
        c *= std::exp(-t * (k0 * k0 + k1 * k1));
    });
}

void apply_advection_symbol(SpectralField& F, const std::array<double, 2>& a) {
    for_each_mode(F, [&a](Complex& c, double k0, double k1, bool ny0, bool ny1) {
        if (ny0 || ny1) {
            c = 0.0;
            return;
        }
        c *= Complex{0.0, a[0] * k0 + a[1] * k1};
    });
}

RealField partial_derivative(const RealField& f, const MultiIndex& gamma) {
    if (gamma.order() > 8) throw OrderTooHigh("partial_derivative: |gamma| must be <= 8");
    SpectralField F = forward_transform(f);
    const auto g0 = gamma.components[0], g1 = gamma.components[1];
    for_each_mode(F, [g0, g1](Complex& c, double k0, double k1, bool ny0, bool ny1) {
        // unpaired Nyquist mode is zeroed whenever the symbol is odd in that axis
        if ((ny0 && (g0 & 1)) || (ny1 && (g1 & 1))) {
            c = 0.0;
            return;
        }
        c *= ipow(Complex{0.0, k0}, g0) * ipow(Complex{0.0, k1}, g1);
    });
    return inverse_transform(F);
}

RealField fractional_derivative(const RealField& f, double beta) {
    if (!(beta > 0.0)) throw InvalidBeta("fractional_derivative: beta must be positive");
    SpectralField F = forward_transform(f);
    for_each_mode(F, [beta](Complex& c, double k0, double k1, bool, bool) {
        double k2 = k0 * k0 + k1 * k1;
        c *= k2 == 0.0 ? 0.0 : std::pow(k2, 0.5 * beta);
    });
    return inverse_transform(F);
}

RealField riesz_potential(const RealField& f, double beta) {
    if (!(beta > 0.0) || !(beta < f.grid.dim))
        throw InvalidBeta("riesz_potential: beta must lie in (0, n)");
    if (std::fabs(integrate(f)) > 1e-10 * lp_norm(f, 1.0))
        throw NonZeroMass("riesz_potential: input must have zero mass");
    SpectralField F = forward_transform(f);
    for_each_mode(F, [beta](Complex& c, double k0, double k1, bool, bool) {
        double k2 = k0 * k0 + k1 * k1;
        c = k2 == 0.0 ? Complex{} : c / std::pow(k2, 0.5 * beta);
    });
    return inverse_transform(F);
}

RealField gauss_kernel(const GridSpec& grid, double t) {
    if (!(t > 0.0)) throw NonPositiveTime("gauss_kernel: t must be positive");
    const double norm = std::pow(2.0 * kTwoPi * t, -0.5 * grid.dim);
    return sample(grid, std::function<double(double, double)>(
                            [t, norm](double x, double y) {
                                return norm * std::exp(-(x * x + y * y) / (4.0 * t));
                            }));
}

RealField self_similar_profile(const GridSpec& grid, double beta, const MultiIndex& gamma,
                               double t) {
    if (!(t > 0.0)) throw NonPositiveTime("self_similar_profile: t must be positive");
    if (beta < 0.0) throw InvalidBeta("self_similar_profile: beta must be >= 0");
    SpectralField F(grid);
    const double amp = std::pow(kTwoPi, -0.5 * grid.dim);
    const auto g0 = gamma.components[0], g1 = gamma.components[1];
    for (auto& c : F.coeffs) c = 1.0;
    for_each_mode(F, [&](Complex& c, double k0, double k1, bool ny0, bool ny1) {
        if ((ny0 && (g0 & 1)) || (ny1 && (g1 & 1))) {
            c = 0.0;
            return;
        }
        double k2 = k0 * k0 + k1 * k1;
        double frac = k2 == 0.0 ? (beta == 0.0 ? 1.0 : 0.0) : std::pow(k2, 0.5 * beta);
        c = amp * frac * std::exp(-t * k2) * ipow(Complex{0.0, k0}, g0) *
            ipow(Complex{0.0, k1}, g1);
    });
    return inverse_transform(F);
}

RealField multiplier_apply(const RealField& f, const MultiplierSymbol& symbol) {
    SpectralField F = forward_transform(f);
    for_each_mode(F, [&symbol](Complex& c, double k0, double k1, bool ny0, bool ny1) {
        if (k0 == 0.0 && k1 == 0.0) {
            c = 0.0;
            return;
        }
        Complex l = symbol(k0, k1);
        // unpaired modes take only the real (self-conjugate) part of the symbol
        if (ny0 || ny1) l = Complex{l.real(), 0.0};
        c *= l;
    });
    return inverse_transform(F);  // throws SymmetryViolation on a bad symbol
}

RealField advection_divergence(const RealField& f, const std::array<double, 2>& a) {
    SpectralField F = forward_transform(f);
    apply_advection_symbol(F, a);
    return inverse_transform(F);
}

}  // namespace zml
