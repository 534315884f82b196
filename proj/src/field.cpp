#include "zml/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "zml/kernels.hpp"

namespace zml {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// FFTW planning is not thread-safe; execution on distinct arrays is.
// Plans are created once per (dim, N, sign) with FFTW_UNALIGNED so they can
// be replayed on any caller buffer.
class PlanCache {
  public:
    static fftw_plan get(int dim, int n, int sign) {
        static PlanCache cache;
        std::scoped_lock lock(cache.mutex_);
        auto key = std::tuple{dim, n, sign};
        auto it = cache.plans_.find(key);
        if (it != cache.plans_.end()) return it->second;

        std::size_t total = dim == 1 ? static_cast<std::size_t>(n)
                                     : static_cast<std::size_t>(n) * n;
        std::vector<Complex> scratch(total);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan p = dim == 1
            ? fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
            : fftw_plan_dft_2d(n, n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        cache.plans_.emplace(key, p);
        return p;
    }

  private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void execute_dft(const GridSpec& g, int sign, std::vector<Complex>& buf) {
    fftw_plan p = PlanCache::get(g.dim, g.points_per_dim, sign);
    auto* b = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(p, b, b);
}

// (-1)^(k1+...+kn) for a flat index; absorbs the x-origin at -L.
double checker(const GridSpec& g, std::size_t flat) {
    auto [i0, i1] = g.unravel(flat);
    return ((i0 + i1) & 1) ? -1.0 : 1.0;
}

}  // namespace

RealField::RealField(const GridSpec& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != g.size()) throw Error("RealField: sample count does not match grid");
}

double SpectralField::hermitian_defect() const {
    const int N = grid.points_per_dim;
    double peak = 0.0;
    for (const auto& c : coeffs) peak = std::max(peak, std::abs(c));
    if (peak == 0.0) return 0.0;

    double worst = 0.0;
    auto mirror1 = [N](int i) { return i == 0 ? 0 : N - i; };
    if (grid.dim == 1) {
        for (int i = 0; i < N; ++i)
            worst = std::max(worst, std::abs(coeffs[mirror1(i)] - std::conj(coeffs[i])));
    } else {
        for (int i0 = 0; i0 < N; ++i0)
            for (int i1 = 0; i1 < N; ++i1) {
                std::size_t a = static_cast<std::size_t>(i0) * N + i1;
                std::size_t b = static_cast<std::size_t>(mirror1(i0)) * N + mirror1(i1);
                worst = std::max(worst, std::abs(coeffs[b] - std::conj(coeffs[a])));
            }
    }
    return worst / peak;
}

void symmetrize(SpectralField& F) {
    const int N = F.grid.points_per_dim;
    auto mirror1 = [N](int i) { return i == 0 ? 0 : N - i; };
    std::vector<Complex>& c = F.coeffs;
    if (F.grid.dim == 1) {
        for (int i = 0; i < N; ++i) {
            int j = mirror1(i);
            if (j < i) continue;
            Complex h = 0.5 * (c[i] + std::conj(c[j]));
            c[i] = h;
            c[j] = std::conj(h);
        }
    } else {
        for (int i0 = 0; i0 < N; ++i0)
            for (int i1 = 0; i1 < N; ++i1) {
                std::size_t a = static_cast<std::size_t>(i0) * N + i1;
                std::size_t b = static_cast<std::size_t>(mirror1(i0)) * N + mirror1(i1);
                if (b < a) continue;
                Complex h = 0.5 * (c[a] + std::conj(c[b]));
                c[a] = h;
                c[b] = std::conj(h);
            }
    }
}

SpectralField forward_transform(const RealField& f) {
    const GridSpec& g = f.grid;
    SpectralField out(g);
    std::vector<Complex>& buf = out.coeffs;
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = f.values[i];
    execute_dft(g, FFTW_FORWARD, buf);

    const double scale = std::pow(kTwoPi, -0.5 * g.dim) * std::pow(g.spacing(), g.dim);
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= scale * checker(g, i);
    return out;
}

RealField inverse_transform(const SpectralField& F) {
    const GridSpec& g = F.grid;
    double defect = F.hermitian_defect();
    if (defect > 1e-8)
        throw SymmetryViolation("inverse_transform: Hermitian defect " + std::to_string(defect));

    std::vector<Complex> buf = F.coeffs;
    const double scale =
        std::pow(kTwoPi, -0.5 * g.dim) * std::pow(kPi / g.half_width, g.dim);
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= scale * checker(g, i);
    execute_dft(g, FFTW_BACKWARD, buf);

    RealField out(g);
    for (std::size_t i = 0; i < buf.size(); ++i) out.values[i] = buf[i].real();
    return out;
}

double integrate(const RealField& f) {
    return std::pow(f.grid.spacing(), f.grid.dim) *
           kernels::sum(f.values.data(), f.values.size());
}

double lp_norm(const RealField& f, double p) {
    if (std::isinf(p)) return kernels::abs_max(f.values.data(), f.values.size());
    if (p < 1.0) throw InvalidExponent("lp_norm: p must be >= 1 or infinity");
    const double cell = std::pow(f.grid.spacing(), f.grid.dim);
    if (p == 1.0) return cell * kernels::abs_sum(f.values.data(), f.values.size());
    if (p == 2.0) return std::sqrt(cell * kernels::sq_sum(f.values.data(), f.values.size()));
    double s = 0.0;
    for (double v : f.values) s += std::pow(std::fabs(v), p);
    return std::pow(cell * s, 1.0 / p);
}

RealField sample(const GridSpec& g, const std::function<double(double, double)>& fn) {
    RealField out(g);
    if (g.dim == 1) {
        for (int i = 0; i < g.points_per_dim; ++i) out.values[i] = fn(g.coord(i), 0.0);
    } else {
        std::size_t flat = 0;
        for (int i0 = 0; i0 < g.points_per_dim; ++i0)
            for (int i1 = 0; i1 < g.points_per_dim; ++i1)
                out.values[flat++] = fn(g.coord(i0), g.coord(i1));
    }
    return out;
}

RealField sample(const GridSpec& g, const std::function<double(double)>& fn) {
    if (g.dim != 1) throw Error("sample: 1d sampler on a 2d grid");
    return sample(g, [&fn](double x, double) { return fn(x); });
}

// Spectral zero-padding: embed coarse coefficients into a factor*N grid.
// The unpaired Nyquist coefficient is split evenly over +-N/2 to keep the
// fine field real.
SpectralField pad_embed(const SpectralField& F, int factor) {
    const GridSpec& g = F.grid;
    const int N = g.points_per_dim;
    GridSpec fine(g.dim, g.half_width, N * factor);
    SpectralField out(fine);
    const int M = fine.points_per_dim;

    auto fine_idx = [M](int mode) { return mode >= 0 ? mode : M + mode; };
    if (g.dim == 1) {
        for (int i = 0; i < N; ++i) {
            int k = g.mode(i);
            if (k == -N / 2) {
                out.coeffs[fine_idx(-N / 2)] += 0.5 * F.coeffs[i];
                out.coeffs[fine_idx(N / 2)] += 0.5 * F.coeffs[i];
            } else {
                out.coeffs[fine_idx(k)] = F.coeffs[i];
            }
        }
    } else {
        for (int i0 = 0; i0 < N; ++i0)
            for (int i1 = 0; i1 < N; ++i1) {
                Complex c = F.coeffs[static_cast<std::size_t>(i0) * N + i1];
                int k0 = g.mode(i0), k1 = g.mode(i1);
                const bool ny0 = (k0 == -N / 2), ny1 = (k1 == -N / 2);
                for (int s0 = 0; s0 < (ny0 ? 2 : 1); ++s0)
                    for (int s1 = 0; s1 < (ny1 ? 2 : 1); ++s1) {
                        int m0 = ny0 ? (s0 ? N / 2 : -N / 2) : k0;
                        int m1 = ny1 ? (s1 ? N / 2 : -N / 2) : k1;
                        double w = (ny0 ? 0.5 : 1.0) * (ny1 ? 0.5 : 1.0);
                        out.coeffs[static_cast<std::size_t>(fine_idx(m0)) * M + fine_idx(m1)] +=
                            w * c;
                    }
            }
    }
    return out;
}

// Inverse of pad_embed: gather fine coefficients back onto the coarse
// lattice, recombining the split Nyquist pair.
SpectralField pad_restrict(const SpectralField& F, const GridSpec& coarse) {
    const int N = coarse.points_per_dim;
    const int M = F.grid.points_per_dim;
    SpectralField out(coarse);
    auto fine_idx = [M](int mode) { return mode >= 0 ? mode : M + mode; };

    if (coarse.dim == 1) {
        for (int i = 0; i < N; ++i) {
            int k = coarse.mode(i);
            if (k == -N / 2)
                out.coeffs[i] = F.coeffs[fine_idx(-N / 2)] + F.coeffs[fine_idx(N / 2)];
            else
                out.coeffs[i] = F.coeffs[fine_idx(k)];
        }
    } else {
        auto fetch = [&](int k0, int k1) {
            return F.coeffs[static_cast<std::size_t>(fine_idx(k0)) * M + fine_idx(k1)];
        };
        for (int i0 = 0; i0 < N; ++i0)
            for (int i1 = 0; i1 < N; ++i1) {
                int k0 = coarse.mode(i0), k1 = coarse.mode(i1);
                const bool ny0 = (k0 == -N / 2), ny1 = (k1 == -N / 2);
                Complex c{};
                for (int s0 = 0; s0 < (ny0 ? 2 : 1); ++s0)
                    for (int s1 = 0; s1 < (ny1 ? 2 : 1); ++s1)
                        c += fetch(ny0 ? (s0 ? N / 2 : -N / 2) : k0,
                                   ny1 ? (s1 ? N / 2 : -N / 2) : k1);
                out.coeffs[static_cast<std::size_t>(i0) * N + i1] = c;
            }
    }
    return out;
}

RealField pad_pointwise_apply(const RealField& f, const std::function<double(double)>& phi,
                              int factor) {
    if (factor < 2) throw Error("pad_pointwise_apply: factor must be >= 2");
    SpectralField fine = pad_embed(forward_transform(f), factor);
    RealField up = inverse_transform(fine);
    for (double& v : up.values) v = phi(v);
    return inverse_transform(pad_restrict(forward_transform(up), f.grid));
}

RealField operator+(const RealField& a, const RealField& b) {
    if (!(a.grid == b.grid)) throw GridMismatch("operator+: grids differ");
    RealField out = a;
    kernels::axpy(out.values.data(), 1.0, b.values.data(), out.values.size());
    return out;
}

RealField operator-(const RealField& a, const RealField& b) {
    if (!(a.grid == b.grid)) throw GridMismatch("operator-: grids differ");
    RealField out = a;
    kernels::axpy(out.values.data(), -1.0, b.values.data(), out.values.size());
    return out;
}

RealField operator*(double c, const RealField& f) {
    RealField out = f;
    kernels::scale(out.values.data(), c, out.values.size());
    return out;
}

}  // namespace zml
