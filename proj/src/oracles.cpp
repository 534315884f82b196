#include "zml/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace zml {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Symmetric tridiagonal QL with implicit shifts, tracking only the first
// row of the eigenvector matrix (all Golub-Welsch needs for weights).
void tql_first_row(std::vector<double>& d, std::vector<double>& e, std::vector<double>& v) {
    const int n = static_cast<int>(d.size());
    e.push_back(0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 1e-300 + 1e-16 * dd) break;
            }
            if (m != l) {
                if (++iter == 60) throw Error("tql_first_row: too many iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = v[i + 1];
                    v[i + 1] = s * v[i] + c * f;
                    v[i] = c * v[i] - s * f;
                }
                if (r == 0.0 && m - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// Golub-Welsch for int exp(-z^2) f(z) dz: Hermite Jacobi matrix has zero
// diagonal and off-diagonal sqrt(j/2).
void gauher(int n, std::vector<double>& x, std::vector<double>& w) {
    std::vector<double> d(n, 0.0), e(n - 1);
    for (int j = 1; j < n; ++j) e[j - 1] = std::sqrt(0.5 * j);
    std::vector<double> v(n, 0.0);
    v[0] = 1.0;
    tql_first_row(d, e, v);

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
    x.resize(n);
    w.resize(n);
    const double mu0 = std::sqrt(kPi);
    for (int i = 0; i < n; ++i) {
        x[i] = d[order[i]];
        w[i] = mu0 * v[order[i]] * v[order[i]];
    }
}

struct GaussQuadrature {
    std::vector<double> z, w;  // weights include the exp(-z^2) factor
};

GaussQuadrature build_quadrature(const QuadratureSpec& spec) {
    GaussQuadrature q;
    if (spec.rule == QuadratureSpec::Rule::gauss_hermite_like) {
        gauss_hermite_nodes(spec.node_count, q.z, q.w);
    } else {
        // uniform nodes on [-R, R]; trapezoid is spectrally accurate here
        // because the Gaussian weight kills both endpoints
        const double R = 8.5;
        const int n = spec.node_count;
        const double dz = 2.0 * R / (n - 1);
        q.z.resize(n);
        q.w.resize(n);
        for (int i = 0; i < n; ++i) {
            q.z[i] = -R + i * dz;
            q.w[i] = std::exp(-q.z[i] * q.z[i]) * dz * (i == 0 || i == n - 1 ? 0.5 : 1.0);
        }
    }
    return q;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (node_count < 64) throw Error("QuadratureSpec: node_count must be >= 64");
    if (!(truncation_radius > 0.0)) throw Error("QuadratureSpec: truncation_radius must be > 0");
}

void gauss_hermite_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw Error("gauss_hermite_nodes: need n >= 1");
    gauher(n, x, w);
}

Profile1D make_profile(const RealField& u0, double support_radius) {
    if (u0.grid.dim != 1) throw Error("make_profile: 1d only");
    const GridSpec g = u0.grid;
    const int N = g.points_per_dim;
    const double h = g.spacing();
    const double x0 = g.coord(0);

    auto vals = std::make_shared<std::vector<double>>(u0.values);
    auto prim = std::make_shared<std::vector<double>>(N, 0.0);
    for (int i = 1; i < N; ++i)
        (*prim)[i] = (*prim)[i - 1] + 0.5 * h * ((*vals)[i - 1] + (*vals)[i]);

    // cubic Hermite on V with slopes u0 (V' = u0); value = dV/dx of the cell
    auto locate = [x0, h, N](double y, int& i, double& s) {
        double r = (y - x0) / h;
        i = static_cast<int>(std::floor(r));
        if (i < 0) i = 0;
        if (i > N - 2) i = N - 2;
        s = r - i;
    };
    auto primitive = [=](double y) {
        if (y <= x0) return 0.0;
        if (y >= x0 + (N - 1) * h) return prim->back();
        int i;
        double s;
        locate(y, i, s);
        double v0 = (*prim)[i], v1 = (*prim)[i + 1];
        double m0 = h * (*vals)[i], m1 = h * (*vals)[i + 1];
        double s2 = s * s, s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * v0 + (s3 - 2 * s2 + s) * m0 +
               (-2 * s3 + 3 * s2) * v1 + (s3 - s2) * m1;
    };
    auto value = [=](double y) {
        if (y <= x0 || y >= x0 + (N - 1) * h) return 0.0;
        int i;
        double s;
        locate(y, i, s);
        double v0 = (*prim)[i], v1 = (*prim)[i + 1];
        double m0 = h * (*vals)[i], m1 = h * (*vals)[i + 1];
        double s2 = s * s;
        return ((6 * s2 - 6 * s) * v0 + (3 * s2 - 4 * s + 1) * m0 +
                (6 * s - 6 * s2) * v1 + (3 * s2 - 2 * s) * m1) / h;
    };

    Profile1D p;
    p.value = value;
    p.primitive = primitive;
    p.l1 = lp_norm(u0, 1.0);
    p.support_radius = support_radius;
    return p;
}

Profile1D dipole_profile(double mass, double width) {
    const double t = width * width;
    auto gauss = [mass, t](double x) {
        return mass * std::pow(4.0 * kPi * t, -0.5) * std::exp(-x * x / (4.0 * t));
    };
    Profile1D p;
    p.value = [gauss, t](double x) { return -x / (2.0 * t) * gauss(x); };
    p.primitive = gauss;  // d/dx gauss integrates back to gauss, vanishing at -inf
    p.l1 = 2.0 * std::fabs(mass) * std::pow(4.0 * kPi * t, -0.5);
    p.support_radius = std::sqrt(t) * 40.0;  // effective: below 1e-300 outside
    return p;
}

std::vector<double> cole_hopf_solution(const Profile1D& u0, double t,
                                       const std::vector<double>& x_points,
                                       const QuadratureSpec& spec, double a) {
    spec.validate();
    if (!(t > 0.0)) throw NonPositiveTime("cole_hopf_solution: t must be positive");
    if (!(a > 0.0)) throw Error("cole_hopf_solution: advection coefficient must be positive");
    if (u0.support_radius > spec.truncation_radius)
        throw SupportTooLarge("cole_hopf_solution: datum exceeds quadrature truncation radius");

    const double rt2 = 2.0 * std::sqrt(t);
    const double floor_bound = std::exp(-a * u0.l1) - 1e-6;
    std::vector<double> out(x_points.size());

    const double R = u0.support_radius;
    const int K = 16 * spec.node_count;
    const double dy = 2.0 * R / K;

    if (dy > rt2 / 6.0) {
        // heat kernel too narrow for the support-wide grid: substitute
        // y = x + 2 sqrt(t) z against the Gaussian weight instead
        GaussQuadrature q = build_quadrature(spec);
        for (std::size_t i = 0; i < x_points.size(); ++i) {
            double num = 0.0, den = 0.0, wsum = 0.0;
            for (std::size_t j = 0; j < q.z.size(); ++j) {
                double y = x_points[i] + rt2 * q.z[j];
                double w0 = std::exp(-a * u0.primitive(y));
                num += q.w[j] * u0.value(y) * w0;
                den += q.w[j] * w0;
                wsum += q.w[j];
            }
            // normalize by the quadrature's own measure of sqrt(pi)
            den /= wsum;
            num /= wsum;
            if (den < floor_bound)
                throw DenominatorBreach("cole_hopf_solution: denominator below exp(-a||u0||_1)");
            out[i] = num / den;
        }
        return out;
    }

    // Heat kernel resolved by the support-wide grid: integrate over the
    // compact support, which stays accurate however wide the kernel gets
    // (the substitution cannot resolve the datum scale at large t). Zero
    // mass makes w0 - 1 compact too, so both integrands vanish outside
    // [-R, R] and the trapezoid rule is superalgebraically accurate.
    std::vector<double> y(K + 1), fn(K + 1), fd(K + 1);
    for (int j = 0; j <= K; ++j) {
        y[j] = -R + j * dy;
        double w0 = std::exp(-a * u0.primitive(y[j]));
        fn[j] = u0.value(y[j]) * w0;
        fd[j] = w0 - 1.0;
    }
    const double kern_scale = std::pow(4.0 * kPi * t, -0.5) * dy;
    for (std::size_t i = 0; i < x_points.size(); ++i) {
        double num = 0.0, den = 0.0;
        for (int j = 0; j <= K; ++j) {
            double d = x_points[i] - y[j];
            double kern = std::exp(-d * d / (4.0 * t));
            double wgt = (j == 0 || j == K) ? 0.5 : 1.0;
            num += wgt * kern * fn[j];
            den += wgt * kern * fd[j];
        }
        num *= kern_scale;
        den = 1.0 + den * kern_scale;
        if (den < floor_bound)
            throw DenominatorBreach("cole_hopf_solution: denominator below exp(-a||u0||_1)");
        out[i] = num / den;
    }
    return out;
}

std::vector<double> heat_flow_solution(const Profile1D& u0, double t,
                                       const std::vector<double>& x_points,
                                       const QuadratureSpec& spec) {
    spec.validate();
    if (!(t > 0.0)) throw NonPositiveTime("heat_flow_solution: t must be positive");
    if (u0.support_radius > spec.truncation_radius)
        throw SupportTooLarge("heat_flow_solution: datum exceeds quadrature truncation radius");

    const double rt2 = 2.0 * std::sqrt(t);
    std::vector<double> out(x_points.size());

    const double R = u0.support_radius;
    const int K = 16 * spec.node_count;
    const double dy = 2.0 * R / K;

    if (dy > rt2 / 6.0) {
        GaussQuadrature q = build_quadrature(spec);
        for (std::size_t i = 0; i < x_points.size(); ++i) {
            double num = 0.0, wsum = 0.0;
            for (std::size_t j = 0; j < q.z.size(); ++j) {
                num += q.w[j] * u0.value(x_points[i] + rt2 * q.z[j]);
                wsum += q.w[j];
            }
            out[i] = num / wsum;
        }
        return out;
    }

    std::vector<double> y(K + 1), fn(K + 1);
    for (int j = 0; j <= K; ++j) {
        y[j] = -R + j * dy;
        fn[j] = u0.value(y[j]);
    }
    const double kern_scale = std::pow(4.0 * kPi * t, -0.5) * dy;
    for (std::size_t i = 0; i < x_points.size(); ++i) {
        double num = 0.0;
        for (int j = 0; j <= K; ++j) {
            double d = x_points[i] - y[j];
            double wgt = (j == 0 || j == K) ? 0.5 : 1.0;
            num += wgt * std::exp(-d * d / (4.0 * t)) * fn[j];
        }
        out[i] = num * kern_scale;
    }
    return out;
}

double cole_hopf_refinement_delta(const Profile1D& u0, double t,
                                  const std::vector<double>& x_points,
                                  const QuadratureSpec& spec, double a) {
    std::vector<double> coarse = cole_hopf_solution(u0, t, x_points, spec, a);
    QuadratureSpec fine = spec;
    fine.node_count *= 2;
    std::vector<double> ref = cole_hopf_solution(u0, t, x_points, fine, a);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        num = std::max(num, std::fabs(coarse[i] - ref[i]));
        den = std::max(den, std::fabs(ref[i]));
    }
    return den > 0.0 ? num / den : num;
}

RealField heat_exact(const std::string& kind, const HeatExactParams& p, double t) {
    if (!(t > 0.0)) throw NonPositiveTime("heat_exact: t must be positive");
    if (kind == "gaussian")
        return p.amplitude * gauss_kernel(p.grid, p.s + t);
    if (kind == "gaussian_derivative")
        return p.amplitude * self_similar_profile(p.grid, 0.0, p.gamma, p.s + t);
    if (kind == "fractional_profile")
        return p.amplitude * self_similar_profile(p.grid, p.beta, MultiIndex{}, p.s + t);
    throw UnsupportedKind("heat_exact: unknown kind '" + kind + "'");
}

double riesz_constant(double beta) {
    if (!(beta > 0.0) || !(beta < 1.0)) throw InvalidBeta("riesz_constant: beta in (0,1)");
    return std::tgamma(0.5 * (1.0 - beta)) /
           (std::pow(2.0, beta) * std::sqrt(kPi) * std::tgamma(0.5 * beta));
}

namespace {

// Convolution table for the periodic piecewise-linear quadrature.
// Phi(s) = int |s-r|^{beta-1} hat_h(r) dr comes from the second exact
// antiderivative A2 of the kernel; the hat is the distributional second
// difference (1/h)(delta_{-h} - 2 delta_0 + delta_h) twice integrated, so
// Phi(s) = (A2(s+h) - 2 A2(s) + A2(s-h)) / h.
class RieszTable {
  public:
    static const std::vector<double>& get(const GridSpec& g, double beta) {
        static RieszTable inst;
        std::scoped_lock lock(inst.mutex_);
        auto key = std::tuple{g.points_per_dim, g.half_width, beta};
        auto it = inst.tables_.find(key);
        if (it != inst.tables_.end()) return it->second;
        return inst.tables_.emplace(key, build(g, beta)).first->second;
    }

  private:
    static std::vector<double> build(const GridSpec& g, double beta) {
        const int N = g.points_per_dim;
        const double h = g.spacing();
        const double b1 = beta + 1.0, b2 = beta + 2.0;
        auto A2 = [&](double s) { return std::pow(std::fabs(s), b1) / (beta * b1); };
        auto A3 = [&](double s) {
            double v = std::pow(std::fabs(s), b2) / (beta * b1 * b2);
            return s >= 0.0 ? v : -v;
        };
        auto Phi = [&](double s) { return (A2(s + h) - 2.0 * A2(s) + A2(s - h)) / h; };
        auto Psi = [&](double s) { return (A3(s + h) - 2.0 * A3(s) + A3(s - h)) / h; };

        // direct images |m| <= M, then midpoint-rule integral tails; the
        // r-independent divergent parts drop against zero-mass data
        const int M = 64;
        std::vector<double> T(N, 0.0);
        const double box = N * h;  // period 2L
        for (int r = 0; r < N; ++r) {
            double acc = 0.0;
            for (int m = -M; m <= M; ++m) acc += Phi(r * h - m * box);
            double edge = (M + 0.5) * box;
            acc += (Psi(r * h - edge) - Psi(r * h + edge)) / box;
            T[r] = acc;
        }
        return T;
    }

    std::mutex mutex_;
    std::map<std::tuple<int, double, double>, std::vector<double>> tables_;
};

}  // namespace

RealField riesz_kernel_oracle(const RealField& u0, double beta) {
    if (u0.grid.dim != 1) throw Error("riesz_kernel_oracle: 1d only");
    if (!(beta > 0.0) || !(beta < 1.0))
        throw InvalidBeta("riesz_kernel_oracle: beta must lie in (0,1)");
    if (std::fabs(integrate(u0)) > 1e-10 * lp_norm(u0, 1.0))
        throw NonZeroMass("riesz_kernel_oracle: datum must have zero mass");

    const GridSpec& g = u0.grid;
    const int N = g.points_per_dim;
    const std::vector<double>& T = RieszTable::get(g, beta);
    const double C = riesz_constant(beta);

    RealField out(g);
    for (int i = 0; i < N; ++i) {
        double s = 0.0;
        for (int j = 0; j < N; ++j) {
            int d = i - j;
            if (d < 0) d += N;
            s += u0.values[j] * T[d];
        }
        out.values[i] = C * s;
    }
    // spectral operator zeroes the mean mode; match that convention
    double mean = 0.0;
    for (double v : out.values) mean += v;
    mean /= N;
    for (double& v : out.values) v -= mean;
    return out;
}

}  // namespace zml
