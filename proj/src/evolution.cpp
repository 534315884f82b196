#include "zml/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zml/kernels.hpp"
#include "zml/operators.hpp"

namespace zml {

namespace {

double signed_pow(double u, double q) {
    return u >= 0.0 ? std::pow(u, q) : -std::pow(-u, q);
}

// Spectral evaluation of a.grad(flux(u)) with dealiasing by padding.
// Also reports max|u| for the blowup monitor.
class FluxOperator {
  public:
    FluxOperator(const GridSpec& grid, double q, std::array<double, 2> a, int pad, FluxForm form)
        : grid_(grid), q_(q), a_(a), pad_(pad), form_(form) {}

    SpectralField operator()(const SpectralField& U, double* max_abs = nullptr) const {
        RealField fine = inverse_transform(pad_embed(U, pad_));
        if (max_abs) *max_abs = kernels::abs_max(fine.values.data(), fine.values.size());
        if (form_ == FluxForm::signed_power)
            for (double& v : fine.values) v = signed_pow(v, q_);
        else
            for (double& v : fine.values) v = std::pow(v, q_);
        SpectralField F = pad_restrict(forward_transform(fine), grid_);
        apply_advection_symbol(F, a_);
        return F;
    }

  private:
    GridSpec grid_;
    double q_;
    std::array<double, 2> a_;
    int pad_;
    FluxForm form_;
};

std::vector<double> heat_decay_factors(const GridSpec& g, double t) {
    std::vector<double> e(g.size());
    const int N = g.points_per_dim;
    if (g.dim == 1) {
        for (int i = 0; i < N; ++i) {
            double k = g.wavenumber(i);
            e[i] = std::exp(-t * k * k);
        }
    } else {
        std::size_t flat = 0;
        for (int i0 = 0; i0 < N; ++i0)
            for (int i1 = 0; i1 < N; ++i1, ++flat) {
                double k0 = g.wavenumber(i0), k1 = g.wavenumber(i1);
                e[flat] = std::exp(-t * (k0 * k0 + k1 * k1));
            }
    }
    return e;
}

}  // namespace

void SimConfig::validate() const {
    if (!(q > 1.0)) throw Error("SimConfig: q must be > 1");
    if (!(beta > 0.0) || !(beta < 1.0)) throw InvalidBeta("SimConfig: beta must lie in (0,1)");
    if (!(T > t0)) throw Error("SimConfig: horizon must exceed start time");
    if (!(dt > 0.0)) throw Error("SimConfig: dt must be positive");
    if (pad_factor < 2) throw Error("SimConfig: pad_factor must be >= 2");
}

RealField nonlinear_flux_divergence(const RealField& f, double q, const std::array<double, 2>& a,
                                    int pad, FluxForm form) {
    if (!(q > 1.0)) throw Error("nonlinear_flux_divergence: q must be > 1");
    FluxOperator op(f.grid, q, a, pad, form);
    return inverse_transform(op(forward_transform(f)));
}

std::vector<double> make_log_samples(const SimConfig& c) {
    std::vector<double> out;
    if (c.t0 > 0.0) {
        out = log_spaced(c.t0, c.T, c.sample_count);
    } else {
        out = log_spaced(std::min(c.T * 1e-3, 1.0), c.T, std::max(1, c.sample_count - 1));
        out.insert(out.begin(), 0.0);
    }
    if (out.back() != c.T) out.push_back(c.T);  // horizon is always sampled
    return out;
}

Trajectory evolve(const SimConfig& config, const InitialDatum& u0, const Observer& observer) {
    config.validate();
    if (!(u0.field.grid == config.grid)) throw GridMismatch("evolve: datum grid != config grid");

    Trajectory traj;
    traj.config = config;
    traj.sample_times = make_log_samples(config);

    const GridSpec& g = config.grid;
    if (!config.waive_box_check && std::sqrt(config.T) > g.half_width / 4.0)
        traj.warnings.push_back("sqrt(T) exceeds L/4: periodic images may pollute L1 tails");

    const double u0max = lp_norm(u0.field, std::numeric_limits<double>::infinity());
    const double blowup_threshold = config.blowup_factor * std::max(u0max, 1e-300);
    const double anorm = std::hypot(config.a[0], config.a[1]);
    if (anorm > 0.0 && u0max > 0.0) {
        double dt_max = 0.5 * g.spacing() / (config.q * anorm * std::pow(u0max, config.q - 1.0));
        if (config.dt > dt_max)
            traj.warnings.push_back("dt exceeds advective CFL guidance dt_max=" +
                                    std::to_string(dt_max));
    }

    FluxOperator flux(g, config.q, config.a, config.pad_factor, FluxForm{config.flux});

    SpectralField U = forward_transform(u0.field);
    double t = config.t0;  // absolute time

    auto emit = [&](double at) {
        RealField u = inverse_transform(U);
        traj.records.push_back(record_norms(u, at, config.q, config.p_extra));
        if (config.store_snapshots) traj.snapshots.push_back(u);
        if (observer) observer(at, u);
    };

    std::size_t next_sample = 0;
    if (!traj.sample_times.empty() && traj.sample_times[0] <= config.t0 + 1e-15) {
        emit(config.t0);
        next_sample = 1;
    }

    // exact linear propagation per step; decay factors cached per step size
    double cached_dt = -1.0;
    std::vector<double> E_half, E_full;
    auto prepare = [&](double h) {
        if (h == cached_dt) return;
        cached_dt = h;
        E_half = heat_decay_factors(g, 0.5 * h);
        E_full = heat_decay_factors(g, h);
    };

    const std::size_t M = g.size();
    while (t < config.T - 1e-14) {
        double target = next_sample < traj.sample_times.size()
                            ? std::min(traj.sample_times[next_sample], config.T)
                            : config.T;
        double h = std::min(config.dt, target - t);
        prepare(h);

        double umax = 0.0;
        if (config.scheme == Scheme::IFRK4) {
            // classic integrating-factor RK4 on v = e^{t|xi|^2} uhat
            SpectralField A = flux(U, &umax);
            kernels::scale(reinterpret_cast<double*>(A.coeffs.data()), -h, 2 * M);

            SpectralField tmp = U;
            kernels::caxpy(tmp.coeffs.data(), 0.5, A.coeffs.data(), M);
            kernels::cmul_real(tmp.coeffs.data(), E_half.data(), M);
            SpectralField B = flux(tmp);
            kernels::scale(reinterpret_cast<double*>(B.coeffs.data()), -h, 2 * M);

            tmp = U;
            kernels::cmul_real(tmp.coeffs.data(), E_half.data(), M);
            kernels::caxpy(tmp.coeffs.data(), 0.5, B.coeffs.data(), M);
            SpectralField C = flux(tmp);
            kernels::scale(reinterpret_cast<double*>(C.coeffs.data()), -h, 2 * M);

            tmp = U;
            kernels::cmul_real(tmp.coeffs.data(), E_full.data(), M);
            kernels::cmul_real(C.coeffs.data(), E_half.data(), M);
            kernels::caxpy(tmp.coeffs.data(), 1.0, C.coeffs.data(), M);
            SpectralField D = flux(tmp);
            kernels::scale(reinterpret_cast<double*>(D.coeffs.data()), -h, 2 * M);

            // U <- E2 U + (E2 A + 2 E (B + C) + D) / 6, with C pre-multiplied by E
            kernels::cmul_real(U.coeffs.data(), E_full.data(), M);
            kernels::cmul_real(A.coeffs.data(), E_full.data(), M);
            kernels::caxpy(U.coeffs.data(), 1.0 / 6.0, A.coeffs.data(), M);
            kernels::cmul_real(B.coeffs.data(), E_half.data(), M);
            kernels::caxpy(U.coeffs.data(), 2.0 / 6.0, B.coeffs.data(), M);
            kernels::caxpy(U.coeffs.data(), 2.0 / 6.0, C.coeffs.data(), M);
            kernels::caxpy(U.coeffs.data(), 1.0 / 6.0, D.coeffs.data(), M);
        } else {
            // ETDRK2: a = E u + h phi1 N(u); u+ = a + h phi2 (N(a) - N(u))
            SpectralField Nu = flux(U, &umax);
            SpectralField A(g);
            const int N = g.points_per_dim;
            auto phi = [&](std::size_t flat, double& p1, double& p2) {
                auto [i0, i1] = g.unravel(flat);
                double k0 = g.wavenumber(i0);
                double k1 = g.dim == 2 ? g.wavenumber(i1) : 0.0;
                double z = -h * (k0 * k0 + k1 * k1);
                if (std::fabs(z) < 1e-5) {
                    p1 = 1.0 + z / 2.0 + z * z / 6.0;
                    p2 = 0.5 + z / 6.0 + z * z / 24.0;
                } else {
                    double ez = std::exp(z);
                    p1 = (ez - 1.0) / z;
                    p2 = (ez - 1.0 - z) / (z * z);
                }
            };
            (void)N;
            for (std::size_t i = 0; i < M; ++i) {
                double p1, p2;
                phi(i, p1, p2);
                A.coeffs[i] = E_full[i] * U.coeffs[i] - h * p1 * Nu.coeffs[i];
            }
            SpectralField Na = flux(A);
            for (std::size_t i = 0; i < M; ++i) {
                double p1, p2;
                phi(i, p1, p2);
                U.coeffs[i] = A.coeffs[i] + h * p2 * (Nu.coeffs[i] - Na.coeffs[i]);
            }
        }

        if (umax > blowup_threshold)
            throw Blowup("evolve: |u| exceeded blowup threshold at t=" + std::to_string(t));

        t += h;
        if (next_sample < traj.sample_times.size() &&
            t >= traj.sample_times[next_sample] - 1e-12) {
            emit(traj.sample_times[next_sample]);
            ++next_sample;
        }
    }
    while (next_sample < traj.sample_times.size()) {
        emit(config.T);
        ++next_sample;
    }
    return traj;
}

PairResult pair_evolve(const InitialDatum& u0, const InitialDatum& v0, const SimConfig& config) {
    // evolve both with identical stepping and shared sample times, then
    // form the weighted difference records
    PairResult out;
    SimConfig c = config;
    c.store_snapshots = true;
    out.first = evolve(c, u0);
    out.second = evolve(c, v0);

    const int n = config.grid.dim;
    const double q = config.q;
    for (std::size_t i = 0; i < out.first.sample_times.size(); ++i) {
        double t = out.first.sample_times[i];
        if (t <= 0.0) continue;
        RealField diff = out.first.snapshots[i] - out.second.snapshots[i];
        PairDiffRecord r;
        r.t = t;
        r.f_q = std::pow(t, 0.5 * n * (1.0 - 1.0 / q) + 0.5 * config.beta) * lp_norm(diff, q);
        r.f_l1 = std::pow(t, 0.5 * config.beta) * lp_norm(diff, 1.0);
        out.diffs.push_back(r);
    }
    if (!config.store_snapshots) {
        out.first.snapshots.clear();
        out.second.snapshots.clear();
    }
    return out;
}

std::vector<double> graded_grid(double T, int m) {
    std::vector<double> g(m + 1);
    for (int i = 0; i <= m; ++i) {
        double s = static_cast<double>(i) / m;
        g[i] = T * s * s;
    }
    return g;
}

PicardReport picard_iterate(const InitialDatum& u0, const SimConfig& config, int k_max,
                            const std::vector<double>& time_grid, int sigma_nodes,
                            bool waive_critical_check) {
    config.validate();
    if (!waive_critical_check && std::fabs(config.q - config.q_star()) > 1e-9)
        throw Error("picard_iterate: q is not the critical exponent (pass the waiver to force)");
    if (time_grid.size() < 2 || time_grid.front() != 0.0)
        throw Error("picard_iterate: time grid must start at 0");

    const GridSpec& g = config.grid;
    const std::size_t M = g.size();
    const std::size_t nt = time_grid.size();
    const int n = g.dim;
    const double xw = 0.5 * n * (1.0 - 1.0 / config.q) + 0.5 * config.beta;

    PicardReport report;
    report.besov_u0 = besov_norm(u0.field, config.beta, default_besov_grid(g)).value;

    FluxOperator flux(g, config.q, config.a, config.pad_factor, FluxForm{config.flux});
    SpectralField U0 = forward_transform(u0.field);

    // u^0(t) = e^{t Delta} u0 on the grid
    std::vector<SpectralField> prev(nt, SpectralField(g));
    for (std::size_t i = 0; i < nt; ++i) {
        prev[i] = U0;
        apply_heat_multiplier(prev[i], time_grid[i]);
    }

    // linear interpolation of spectral iterates in time
    auto interp = [&](const std::vector<SpectralField>& tr, double tau) {
        auto it = std::upper_bound(time_grid.begin(), time_grid.end(), tau);
        std::size_t hi = std::min<std::size_t>(it - time_grid.begin(), nt - 1);
        std::size_t lo = hi == 0 ? 0 : hi - 1;
        if (hi == lo) return tr[lo];
        double w = (tau - time_grid[lo]) / (time_grid[hi] - time_grid[lo]);
        SpectralField out = tr[lo];
        kernels::scale(reinterpret_cast<double*>(out.coeffs.data()), 1.0 - w, 2 * M);
        kernels::caxpy(out.coeffs.data(), w, tr[hi].coeffs.data(), M);
        return out;
    };

    int rising = 0;
    for (int k = 0; k < k_max; ++k) {
        std::vector<SpectralField> next(nt, SpectralField(g));
        next[0] = U0;
        for (std::size_t i = 1; i < nt; ++i) {
            double t = time_grid[i];
            // Duhamel integral with tau = t - sigma^2 absorbing the
            // (t-tau)^{-1/2} kernel singularity
            double smax = std::sqrt(t);
            double ds = smax / sigma_nodes;
            SpectralField acc(g);
            for (int j = 0; j <= sigma_nodes; ++j) {
                double sigma = j * ds;
                double weight = (j == 0 || j == sigma_nodes) ? 0.5 * ds : ds;
                if (sigma == 0.0) continue;  // integrand vanishes at sigma = 0
                SpectralField F = flux(interp(prev, t - sigma * sigma));
                apply_heat_multiplier(F, sigma * sigma);
                kernels::caxpy(acc.coeffs.data(), 2.0 * sigma * weight, F.coeffs.data(), M);
            }
            next[i] = U0;
            apply_heat_multiplier(next[i], t);
            kernels::caxpy(next[i].coeffs.data(), -1.0, acc.coeffs.data(), M);
        }

        double xnorm = 0.0;
        for (std::size_t i = 1; i < nt; ++i) {
            SpectralField d = next[i];
            kernels::caxpy(d.coeffs.data(), -1.0, prev[i].coeffs.data(), M);
            symmetrize(d);  // cancellation leaves round-off inherited from the iterates
            xnorm = std::max(xnorm, std::pow(time_grid[i], xw) *
                                        lp_norm(inverse_transform(d), config.q));
        }
        report.iterate_norms.push_back(xnorm);
        if (k > 0) {
            double ratio = report.iterate_norms[k] / std::max(report.iterate_norms[k - 1], 1e-300);
            report.contraction_ratios.push_back(ratio);
            rising = ratio > 1.0 ? rising + 1 : 0;
            if (rising >= 2)
                throw NoContraction(
                    "picard_iterate: X-norm ratios exceeded 1 twice in a row (data too large)");
        }
        prev = std::move(next);
        if (!report.contraction_ratios.empty() && xnorm < 1e-15) break;
    }
    report.converged =
        !report.contraction_ratios.empty() && report.contraction_ratios.back() <= 0.9;
    report.fixed_point = inverse_transform(prev.back());
    return report;
}

}  // namespace zml
