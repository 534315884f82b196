#include "zml/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "zml/operators.hpp"

namespace zml {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

double gaussian_bump(double x, double y, double width, double mass, int dim) {
    const double t = width * width;
    const double norm = mass * std::pow(2.0 * kTwoPi * t, -0.5 * dim);
    return norm * std::exp(-(x * x + y * y) / (4.0 * t));
}

// C^inf cutoff: 1 on [0, r0], 0 beyond r1, cos^2 ramp between.
double smooth_cutoff(double r, double r0, double r1) {
    if (r <= r0) return 1.0;
    if (r >= r1) return 0.0;
    double s = (r - r0) / (r1 - r0);
    double c = std::cos(0.5 * 3.14159265358979323846 * s);
    return c * c;
}

}  // namespace

InitialDatum::InitialDatum(RealField f, double b, std::optional<double> A, DatumKind kind)
    : field(std::move(f)), beta(b), amplitude_A(A), construction(kind) {
    if (!(beta > 0.0) || beta > 1.0)
        throw InvalidBeta("InitialDatum: beta must lie in (0, 1]");
    if (std::fabs(integrate(field)) > 1e-10 * lp_norm(field, 1.0))
        throw NonZeroMass("InitialDatum: datum must have zero mass");
}

InitialDatum make_fractional_bump(const GridSpec& grid, double beta, double mass_of_phi,
                                  double width, std::optional<double> truncation_radius) {
    if (!(beta > 0.0) || !(beta < 1.0))
        throw InvalidBeta("make_fractional_bump: beta must lie in (0, 1)");
    if (width > grid.half_width / 8.0)
        throw WidthTooLarge("make_fractional_bump: width must be <= L/8");
    RealField phi = sample(grid, std::function<double(double, double)>(
                                     [&](double x, double y) {
                                         return gaussian_bump(x, y, width, mass_of_phi, grid.dim);
                                     }));
    if (truncation_radius) {
        double r1 = *truncation_radius;
        double r0 = 0.6 * r1;
        std::size_t flat = 0;
        for (int i0 = 0; i0 < grid.points_per_dim; ++i0) {
            if (grid.dim == 1) {
                phi.values[i0] *= smooth_cutoff(std::fabs(grid.coord(i0)), r0, r1);
            } else {
                for (int i1 = 0; i1 < grid.points_per_dim; ++i1, ++flat)
                    phi.values[flat] *= smooth_cutoff(
                        std::hypot(grid.coord(i0), grid.coord(i1)), r0, r1);
            }
        }
    }
    // A = integral of I_beta u0 = integral of phi
    const double A = integrate(phi);
    return {fractional_derivative(phi, beta), beta, A, DatumKind::fractional_bump};
}

InitialDatum make_dipole(const GridSpec& grid, int direction, double mass_of_psi, double width) {
    if (direction < 0 || direction >= grid.dim) throw Error("make_dipole: bad axis");
    if (width > grid.half_width / 8.0)
        throw WidthTooLarge("make_dipole: width must be <= L/8");
    const double t = width * width;
    // closed-form d/dx_j of the Gaussian bump: exactly odd, so mass is
    // zero to round-off by symmetric summation
    RealField u0 = sample(grid, std::function<double(double, double)>(
                                    [&](double x, double y) {
                                        double g = gaussian_bump(x, y, width, mass_of_psi,
                                                                 grid.dim);
                                        double c = direction == 0 ? x : y;
                                        return -c / (2.0 * t) * g;
                                    }));
    return {std::move(u0), 1.0, std::nullopt, DatumKind::dipole};
}

InitialDatum make_miyakawa(const GridSpec& grid, double beta, const MiyakawaParams& p) {
    if (!(beta > 0.0) || !(beta < 1.0))
        throw InvalidBeta("make_miyakawa: beta must lie in (0, 1)");
    if (p.separation + p.width > grid.half_width / 8.0)
        throw SupportTooLarge("make_miyakawa: support must fit in L/4");
    auto bump = [&p](double r2) {
        return r2 < 1.0 ? p.amplitude * std::exp(-1.0 / (1.0 - r2)) : 0.0;
    };
    RealField u0 = sample(grid, std::function<double(double, double)>(
                                    [&](double x, double y) {
                                        double w2 = p.width * p.width;
                                        double rp = ((x - p.separation) * (x - p.separation) +
                                                     y * y) / w2;
                                        double rm = ((x + p.separation) * (x + p.separation) +
                                                     y * y) / w2;
                                        return bump(rp) - bump(rm);
                                    }));
    return {std::move(u0), beta, std::nullopt, DatumKind::compact_miyakawa};
}

InitialDatum make_custom(RealField field, double beta, std::optional<double> amplitude) {
    return {std::move(field), beta, amplitude, DatumKind::custom};
}

AmplitudeEstimate compute_A(const InitialDatum& u0, double beta) {
    SpectralField F = forward_transform(u0.field);
    const GridSpec& g = F.grid;
    const int N = g.points_per_dim;

    // gather uhat/|xi|^beta on the three smallest nonzero shells
    std::map<long long, std::pair<double, int>> shells;  // |k|^2 -> (sum, count)
    auto visit = [&](long long k2int, double kk, Complex c) {
        double v = c.real() / std::pow(kk, beta);
        auto& slot = shells[k2int];
        slot.first += v;
        slot.second += 1;
    };
    if (g.dim == 1) {
        for (int i = 0; i < N; ++i) {
            int k = g.mode(i);
            if (k == 0 || std::abs(k) > 3) continue;
            visit(static_cast<long long>(k) * k, std::fabs(g.wavenumber(i)), F.coeffs[i]);
        }
    } else {
        for (int i0 = 0; i0 < N; ++i0)
            for (int i1 = 0; i1 < N; ++i1) {
                int k0 = g.mode(i0), k1 = g.mode(i1);
                long long k2 = static_cast<long long>(k0) * k0 + static_cast<long long>(k1) * k1;
                if (k2 == 0 || k2 > 4) continue;
                double kk = std::hypot(g.wavenumber(i0), g.wavenumber(i1));
                visit(k2, kk, F.coeffs[static_cast<std::size_t>(i0) * N + i1]);
            }
    }

    std::vector<std::pair<double, double>> pts;  // (|xi|, shell mean)
    constexpr double kPi = 3.14159265358979323846;
    for (const auto& [k2, sum_count] : shells) {
        if (pts.size() == 3) break;
        pts.emplace_back(kPi * std::sqrt(static_cast<double>(k2)) / g.half_width,
                         sum_count.first / sum_count.second);
    }
    if (pts.size() < 3) throw Error("compute_A: grid too small for shell extrapolation");

    double vmax = -1e300, vmin = 1e300;
    for (auto& [xi, v] : pts) {
        vmax = std::max(vmax, v);
        vmin = std::min(vmin, v);
    }
    double scale = std::max(std::fabs(vmax), std::fabs(vmin));
    if (scale > 0.0 && (vmax - vmin) > 0.5 * scale)
        throw InconsistentShells("compute_A: shell values disagree by > 50%; beta misdeclared?");

    // least-squares line v = a + b |xi|; extrapolated amplitude is a
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(pts.size());
    double denom = m * sxx - sx * sx;
    double b = (m * sxy - sx * sy) / denom;
    double a = (sy - b * sx) / m;
    // amplitude is int I_beta u0 = (2pi)^{n/2} lim uhat/|xi|^beta
    const double conv = std::pow(kTwoPi, 0.5 * g.dim);
    return {conv * a, conv * 0.5 * (vmax - vmin)};
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
    return out;
}

std::vector<double> default_besov_grid(const GridSpec& grid) {
    double smax = grid.half_width / 4.0;
    return log_spaced(1e-2, smax * smax, 40);
}

BesovResult besov_norm(const RealField& v, double beta, const std::vector<double>& s_grid) {
    if (s_grid.size() < 2) throw Error("besov_norm: s-grid needs at least 2 points");
    SpectralField F = forward_transform(v);
    BesovResult res;
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        double s = s_grid[i];
        SpectralField Fs = F;
        apply_heat_multiplier(Fs, s);
        double val = std::pow(s, 0.5 * beta) * lp_norm(inverse_transform(Fs), 1.0);
        if (val > res.value) {
            res.value = val;
            res.argmax_s = s;
            res.endpoint_warning = (i == 0 || i + 1 == s_grid.size());
        }
    }
    return res;
}

double moment_beta(const RealField& u0, double beta) {
    const GridSpec& g = u0.grid;
    double s = 0.0;
    if (g.dim == 1) {
        for (int i = 0; i < g.points_per_dim; ++i)
            s += std::pow(std::fabs(g.coord(i)), beta) * std::fabs(u0.values[i]);
    } else {
        std::size_t flat = 0;
        for (int i0 = 0; i0 < g.points_per_dim; ++i0)
            for (int i1 = 0; i1 < g.points_per_dim; ++i1, ++flat)
                s += std::pow(std::hypot(g.coord(i0), g.coord(i1)), beta) *
                     std::fabs(u0.values[flat]);
    }
    return std::pow(g.spacing(), g.dim) * s;
}

}  // namespace zml
