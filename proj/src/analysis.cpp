#include "zml/analysis.hpp"

#include <cmath>
#include <limits>

#include "zml/operators.hpp"

namespace zml {

NormRecord record_norms(const RealField& u, double t, double q,
                        const std::vector<double>& p_list) {
    NormRecord r;
    r.t = t;
    r.l1 = lp_norm(u, 1.0);
    r.lq = lp_norm(u, q);
    r.linf = lp_norm(u, std::numeric_limits<double>::infinity());
    r.mass = integrate(u);
    for (double p : p_list) r.lp_extra[p] = lp_norm(u, p);
    return r;
}

namespace {

double pick_norm(const NormRecord& r, const std::string& key) {
    if (key == "l1") return r.l1;
    if (key == "lq") return r.lq;
    if (key == "linf") return r.linf;
    if (key.rfind("p:", 0) == 0) {
        double p = std::stod(key.substr(2));
        auto it = r.lp_extra.find(p);
        if (it != r.lp_extra.end()) return it->second;
    }
    throw Error("fit_decay: unknown norm key '" + key + "'");
}

}  // namespace

DecayFit fit_decay(const std::vector<NormRecord>& records, const std::string& norm_key,
                   double t_lo, double t_hi) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : records) {
        if (r.t < t_lo || r.t > t_hi || r.t <= 0.0) continue;
        double v = pick_norm(r, norm_key);
        if (v > 0.0) pts.emplace_back(std::log(r.t), std::log(v));
    }
    if (pts.size() < 8)
        throw WindowTooNarrow("fit_decay: need at least 8 records in the window");
    double span = pts.back().first - pts.front().first;
    if (span < std::log(10.0) - 1e-9)
        throw WindowTooNarrow("fit_decay: window must span at least one decade");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(pts.size());
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double intercept = (sy - slope * sx) / m;

    double rss = 0.0;
    for (auto& [x, y] : pts) {
        double e = y - (intercept + slope * x);
        rss += e * e;
    }
    return {slope, std::exp(intercept), t_lo, t_hi, std::sqrt(rss / m)};
}

ProfileDistance profile_distance(const RealField& u, double t, double A, double beta, double p) {
    if (!(t > 0.0)) throw NonPositiveTime("profile_distance: t must be positive");
    RealField prof = self_similar_profile(u.grid, beta, MultiIndex{}, t);
    const int n = u.grid.dim;
    double scale = std::pow(t, 0.5 * n * (1.0 - 1.0 / p) + 0.5 * beta);
    return {t, p, scale * lp_norm(u - (A * prof), p)};
}

double scaling_collapse(const RealField& u_t1, const RealField& u_t2, double t1, double t2,
                        double beta) {
    if (!(u_t1.grid == u_t2.grid)) throw GridMismatch("scaling_collapse: grids differ");
    double lam = std::sqrt(t2 / t1);
    int ilam = static_cast<int>(std::lround(lam));
    if (ilam < 1 || std::fabs(lam - ilam) > 1e-9)
        throw Error("scaling_collapse: sqrt(t2/t1) must be a (small) integer");

    const GridSpec& g = u_t1.grid;
    const int N = g.points_per_dim;

    // Spectral rescaling: v(x) = lambda^{n+beta} u_t2(lambda x) has Fourier
    // transform lambda^beta uhat_t2(eta/lambda), so placing mode k of u_t2 at
    // mode lambda*k of a box shrunk by lambda realizes the dilation exactly.
    // The comparand is u_t1 periodized to the same smaller box, i.e. its
    // modes at multiples of lambda; algebraic tails wrapping around the
    // original box live in the discarded modes and do not pollute the metric.
    SpectralField F1 = forward_transform(u_t1);
    SpectralField F2 = forward_transform(u_t2);
    GridSpec small(g.dim, g.half_width / ilam, N);
    SpectralField V(small), W(small);
    const double amp = std::pow(static_cast<double>(ilam), beta);
    auto idx_of_mode = [N](long long k) { return k >= 0 ? k : N + k; };
    auto in_range = [N, ilam](int k) {
        long long m = static_cast<long long>(ilam) * k;
        return m >= -N / 2 && m < N / 2;
    };
    if (g.dim == 1) {
        for (int i = 0; i < N; ++i) {
            int k = small.mode(i);
            V.coeffs[i] = amp * F2.coeffs[i];
            if (in_range(k))
                W.coeffs[i] = F1.coeffs[idx_of_mode(static_cast<long long>(ilam) * k)];
        }
    } else {
        std::size_t flat = 0;
        for (int i0 = 0; i0 < N; ++i0)
            for (int i1 = 0; i1 < N; ++i1, ++flat) {
                int k0 = small.mode(i0), k1 = small.mode(i1);
                V.coeffs[flat] = amp * F2.coeffs[flat];
                if (in_range(k0) && in_range(k1))
                    W.coeffs[flat] =
                        F1.coeffs[idx_of_mode(static_cast<long long>(ilam) * k0) *
                                      static_cast<std::size_t>(N) +
                                  idx_of_mode(static_cast<long long>(ilam) * k1)];
            }
    }
    RealField v = inverse_transform(V);
    RealField w = inverse_transform(W);
    double denom = lp_norm(w, 1.0);
    if (denom == 0.0) return 0.0;
    return lp_norm(v - w, 1.0) / denom;
}

std::vector<std::pair<double, double>> g_functional(const std::vector<NormRecord>& records,
                                                    double beta, double q_star) {
    std::vector<std::pair<double, double>> out;
    out.reserve(records.size());
    double sup1 = 0.0, supq = 0.0;
    for (const auto& r : records) {
        double lqstar = r.lq;
        auto it = r.lp_extra.find(q_star);
        if (it != r.lp_extra.end()) lqstar = it->second;
        sup1 = std::max(sup1, std::pow(r.t, 0.5 * beta) * r.l1);
        supq = std::max(supq, std::pow(r.t, (0.5 + 0.5 * beta) / q_star) * lqstar);
        out.emplace_back(r.t, sup1 + supq);
    }
    return out;
}

double holder_interpolation_check(const RealField& u, double q, double q_star) {
    if (q < q_star) throw InvalidExponent("holder_interpolation_check: need q >= q*");
    double lq = lp_norm(u, q);
    double lqs = lp_norm(u, q_star);
    double linf = lp_norm(u, std::numeric_limits<double>::infinity());
    double rhs = std::pow(lqs, q_star) * std::pow(linf, q - q_star);
    if (rhs == 0.0) return 0.0;
    return std::pow(lq, q) / rhs;
}

double linearization_distance(const RealField& u, const InitialDatum& u0, double t_flow,
                              double p) {
    if (t_flow < 0.0) throw NegativeTime("linearization_distance: t must be >= 0");
    return lp_norm(u - heat_semigroup(u0.field, t_flow), p);
}

}  // namespace zml
