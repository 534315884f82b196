#include "zml/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "zml/analysis.hpp"
#include "zml/oracles.hpp"
#include "zml/operators.hpp"

namespace fs = std::filesystem;

namespace zml {

namespace {

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    row += "\r\n";
    return row;
}

struct Meta {
    std::vector<std::pair<std::string, std::string>> lines;
    void add(const std::string& k, const std::string& v) { lines.emplace_back(k, v); }
};

void write_meta(const fs::path& dir, const ExperimentConfig& cfg, const RunOptions& opt,
                double wall_seconds, const Meta& extra) {
    std::ostringstream o;
    o << "tool: zml 0.1.0\n";
    o << "command: " << opt.command << "\n";
    o << "seed: " << opt.seed << "\n";
    o << "threads: " << opt.threads << "\n";
    o << "wall_seconds: " << fmt_double(wall_seconds) << "\n";
    for (const auto& [k, v] : extra.lines) o << k << ": " << v << "\n";
    o << "\n# config echo\n" << cfg.normalized_dump();
    write_file(dir / "meta.txt", o.str());
}

double fit_window_lo(const ExperimentConfig& cfg) {
    if (cfg.analysis.window_lo) return *cfg.analysis.window_lo;
    return std::max(cfg.sim.t0, cfg.sim.T / 10.0);
}

double fit_window_hi(const ExperimentConfig& cfg) {
    return cfg.analysis.window_hi ? *cfg.analysis.window_hi : cfg.sim.T;
}

double amplitude_of(const InitialDatum& u0) {
    if (u0.amplitude_A) return *u0.amplitude_A;
    try {
        return compute_A(u0, u0.beta).value;
    } catch (const Error&) {
        return 0.0;
    }
}

std::string plot_script() {
    return "set logscale xy\n"
           "set datafile separator comma\n"
           "set key left bottom\n"
           "set xlabel 't'\n"
           "set ylabel 'norm'\n"
           "plot 'norms.csv' using 1:2 with linespoints title 'L1', \\\n"
           "     'norms.csv' using 1:3 with linespoints title 'Lq', \\\n"
           "     'norms.csv' using 1:4 with linespoints title 'Linf'\n";
}

struct SimulateArtifacts {
    Trajectory traj;
    std::vector<double> besov;
    std::vector<double> profile;
    double A = 0.0;
};

SimulateArtifacts run_simulation(const ExperimentConfig& cfg, const InitialDatum& u0) {
    SimulateArtifacts art;
    art.A = amplitude_of(u0);
    SimConfig sim = cfg.sim;
    double qs = sim.q_star();
    if (std::find(sim.p_extra.begin(), sim.p_extra.end(), qs) == sim.p_extra.end())
        sim.p_extra.push_back(qs);

    auto grid = default_besov_grid(sim.grid);
    double A = art.A;
    double beta = sim.beta, pp = cfg.analysis.profile_p;
    art.traj = evolve(sim, u0, [&](double t, const RealField& u) {
        art.besov.push_back(besov_norm(u, beta, grid).value);
        art.profile.push_back(t > 0.0 ? profile_distance(u, t, A, beta, pp).value
                                      : std::numeric_limits<double>::quiet_NaN());
    });
    return art;
}

void write_norms_csv(const fs::path& dir, const ExperimentConfig& cfg,
                     const SimulateArtifacts& art) {
    auto g = g_functional(art.traj.records, cfg.sim.beta, cfg.sim.q_star());
    std::string text = csv_row({"t", "l1", "lq", "linf", "mass", "besov_proxy",
                                "profile_distance_p1", "g_functional"});
    for (std::size_t i = 0; i < art.traj.records.size(); ++i) {
        const auto& r = art.traj.records[i];
        text += csv_row({fmt_double(r.t), fmt_double(r.l1), fmt_double(r.lq),
                         fmt_double(r.linf), fmt_double(r.mass), fmt_double(art.besov[i]),
                         fmt_double(art.profile[i]), fmt_double(g[i].second)});
    }
    write_file(dir / "norms.csv", text);
}

void write_fit_csv(const fs::path& dir, const ExperimentConfig& cfg,
                   const std::vector<NormRecord>& records, Meta& meta) {
    std::string text =
        csv_row({"norm_key", "exponent", "prefactor", "window_lo", "window_hi", "residual"});
    for (const std::string& key : cfg.analysis.fit_norms) {
        try {
            DecayFit f = fit_decay(records, key, fit_window_lo(cfg), fit_window_hi(cfg));
            text += csv_row({key, fmt_double(f.exponent), fmt_double(f.prefactor),
                             fmt_double(f.window_lo), fmt_double(f.window_hi),
                             fmt_double(f.residual)});
        } catch (const Error& e) {
            meta.add("fit_skipped_" + key, e.what());
        }
    }
    write_file(dir / "fit.csv", text);
}

std::vector<NormRecord> read_norms_csv(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw Error("cannot read " + p.string() + " (run simulate first)");
    std::vector<NormRecord> records;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() < 5) throw ParseError("malformed norms.csv row: " + line);
        NormRecord r;
        r.t = vals[0];
        r.l1 = vals[1];
        r.lq = vals[2];
        r.linf = vals[3];
        r.mass = vals[4];
        records.push_back(r);
    }
    return records;
}

int cmd_simulate(const ExperimentConfig& cfg, const RunOptions& opt, const fs::path& dir,
                 Meta& meta) {
    InitialDatum u0 = build_datum(cfg, cfg.sim, opt.seed);
    SimulateArtifacts art = run_simulation(cfg, u0);
    write_norms_csv(dir, cfg, art);
    write_fit_csv(dir, cfg, art.traj.records, meta);
    if (cfg.analysis.emit_plot) write_file(dir / "plot.gp", plot_script());
    meta.add("amplitude_A", fmt_double(art.A));
    for (const auto& w : art.traj.warnings) meta.add("warning", w);
    return 0;
}

int cmd_fit(const ExperimentConfig& cfg, const fs::path& dir, Meta& meta) {
    std::vector<NormRecord> records = read_norms_csv(dir / "norms.csv");
    write_fit_csv(dir, cfg, records, meta);
    return 0;
}

int cmd_profile_compare(const ExperimentConfig& cfg, const RunOptions& opt, const fs::path& dir,
                        Meta& meta) {
    InitialDatum u0 = build_datum(cfg, cfg.sim, opt.seed);
    SimulateArtifacts art = run_simulation(cfg, u0);
    std::string text = csv_row({"t", "p", "value"});
    double first = 0.0, last = 0.0;
    bool have_first = false;
    for (std::size_t i = 0; i < art.traj.records.size(); ++i) {
        double t = art.traj.records[i].t;
        if (!(t > 0.0)) continue;
        text += csv_row({fmt_double(t), fmt_double(cfg.analysis.profile_p),
                         fmt_double(art.profile[i])});
        if (!have_first) {
            first = art.profile[i];
            have_first = true;
        }
        last = art.profile[i];
    }
    write_file(dir / "profile.csv", text);
    meta.add("amplitude_A", fmt_double(art.A));
    meta.add("profile_first", fmt_double(first));
    meta.add("profile_last", fmt_double(last));
    if (first > 0.0) meta.add("profile_ratio", fmt_double(last / first));
    return 0;
}

Profile1D oracle_profile(const ExperimentConfig& cfg, const InitialDatum& u0) {
    if (cfg.data.kind == "dipole")
        return dipole_profile(cfg.data.mass * cfg.data.scale, cfg.data.width);
    double radius = cfg.data.truncation_radius ? *cfg.data.truncation_radius
                                               : cfg.sim.grid.half_width;
    return make_profile(u0.field, radius);
}

int cmd_oracle_check(const ExperimentConfig& cfg, const RunOptions& opt, const fs::path& dir,
                     Meta& meta) {
    if (cfg.sim.grid.dim != 1) throw Error("oracle-check: 1d only");
    if (cfg.sim.q != 2.0 || cfg.sim.a[1] != 0.0)
        throw Error("oracle-check: Hopf-Cole oracle requires q = 2, a1 = 0");
    if (cfg.sim.flux != FluxForm::plain_power)
        throw Error("oracle-check: set flux = plain (the oracle solves the u^2 flux)");

    InitialDatum u0 = build_datum(cfg, cfg.sim, opt.seed);
    Profile1D prof = oracle_profile(cfg, u0);
    QuadratureSpec qs;
    qs.node_count = cfg.oracle.nodes;
    qs.rule = cfg.oracle.rule == "gauss" ? QuadratureSpec::Rule::gauss_hermite_like
                                         : QuadratureSpec::Rule::trapezoid_refined;
    qs.truncation_radius = cfg.oracle.truncation_radius;

    const GridSpec& g = cfg.sim.grid;
    std::vector<double> xs(g.points_per_dim);
    for (int i = 0; i < g.points_per_dim; ++i) xs[i] = g.coord(i);

    std::string text = csv_row({"t", "rel_linf_error", "gate_delta"});
    bool failed = false;
    for (double t : cfg.oracle.times) {
        double gate = cole_hopf_refinement_delta(prof, t, xs, qs, cfg.sim.a[0]);
        if (gate > 1e-8)
            throw Error("oracle-check: quadrature not converged (delta " + fmt_double(gate) +
                        "); raise [oracle] nodes");
        std::vector<double> ref = cole_hopf_solution(prof, t, xs, qs, cfg.sim.a[0]);

        SimConfig sim = cfg.sim;
        sim.T = t;
        sim.store_snapshots = true;
        Trajectory traj = evolve(sim, u0);
        const RealField& u = traj.snapshots.back();

        double num = 0.0, den = 0.0;
        for (int i = 0; i < g.points_per_dim; ++i) {
            num = std::max(num, std::fabs(u.values[i] - ref[i]));
            den = std::max(den, std::fabs(ref[i]));
        }
        double rel = den > 0.0 ? num / den : num;
        text += csv_row({fmt_double(t), fmt_double(rel), fmt_double(gate)});
        if (rel > cfg.oracle.tolerance) failed = true;
    }
    write_file(dir / "oracle.csv", text);
    if (failed) {
        meta.add("oracle_gate", "FAILED (see oracle.csv)");
        return 3;
    }
    meta.add("oracle_gate", "passed");
    return 0;
}

int cmd_picard(const ExperimentConfig& cfg, const RunOptions& opt, const fs::path& dir,
               Meta& meta) {
    InitialDatum u0 = build_datum(cfg, cfg.sim, opt.seed);
    std::vector<double> grid = graded_grid(cfg.sim.T, cfg.picard.time_points);
    PicardReport rep = picard_iterate(u0, cfg.sim, cfg.picard.iterations, grid,
                                      cfg.picard.sigma_nodes, cfg.picard.waive_critical);
    std::string text = csv_row({"iterate", "xnorm", "ratio"});
    for (std::size_t k = 0; k < rep.iterate_norms.size(); ++k)
        text += csv_row({std::to_string(k + 1), fmt_double(rep.iterate_norms[k]),
                         k > 0 ? fmt_double(rep.contraction_ratios[k - 1]) : "nan"});
    write_file(dir / "picard.csv", text);
    meta.add("besov_u0", fmt_double(rep.besov_u0));
    meta.add("converged", rep.converged ? "true" : "false");
    return rep.converged ? 0 : 4;
}

int cmd_stability(const ExperimentConfig& cfg, const RunOptions& opt, const fs::path& dir,
                  Meta& meta) {
    InitialDatum u0 = build_datum(cfg, cfg.sim, opt.seed);

    auto perturbed = [&]() -> InitialDatum {
        if (cfg.stability.perturbation == "scale")
            return {2.0 * u0.field, u0.beta, std::nullopt, DatumKind::custom};
        InitialDatum d = make_dipole(cfg.sim.grid, 0, cfg.stability.perturbation_mass,
                                     cfg.stability.perturbation_width);
        return {u0.field + d.field, u0.beta, std::nullopt, DatumKind::custom};
    };

    auto emit = [&](const InitialDatum& v0, const std::string& name) {
        PairResult pr = pair_evolve(u0, v0, cfg.sim);
        std::string text = csv_row({"t", "f_q", "f_l1"});
        for (const auto& d : pr.diffs)
            text += csv_row({fmt_double(d.t), fmt_double(d.f_q), fmt_double(d.f_l1)});
        write_file(dir / name, text);
        if (!pr.diffs.empty()) {
            meta.add(name + "_first_f_q", fmt_double(pr.diffs.front().f_q));
            meta.add(name + "_last_f_q", fmt_double(pr.diffs.back().f_q));
        }
    };

    emit(perturbed(), "stability.csv");
    if (cfg.stability.control) {
        InitialDatum v0{2.0 * u0.field, u0.beta, std::nullopt, DatumKind::custom};
        emit(v0, "stability_control.csv");
    }
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const RunOptions& opt, const fs::path& dir,
              Meta& meta) {
    std::vector<double> qs = cfg.sweep.q_values.empty() ? std::vector<double>{cfg.sim.q}
                                                        : cfg.sweep.q_values;
    std::vector<double> betas = cfg.sweep.beta_values.empty()
                                    ? std::vector<double>{cfg.sim.beta}
                                    : cfg.sweep.beta_values;
    struct Cell {
        double q, beta;
        std::string exponent = "nan", residual = "nan", status = "ok";
    };
    std::vector<Cell> cells;
    for (double q : qs)
        for (double b : betas) cells.push_back({q, b});

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            Cell& cell = cells[i];
            fs::path sub = dir / ("run_" + std::string(i < 10 ? "00" : i < 100 ? "0" : "") +
                                  std::to_string(i));
            fs::create_directories(sub);
            try {
                ExperimentConfig sc = cfg;
                sc.sim.q = cell.q;
                sc.sim.beta = cell.beta;
                sc.sweep = {};
                InitialDatum u0 = build_datum(sc, sc.sim, opt.seed + i);
                SimulateArtifacts art = run_simulation(sc, u0);
                write_norms_csv(sub, sc, art);
                Meta sub_meta;
                write_fit_csv(sub, sc, art.traj.records, sub_meta);
                RunOptions sub_opt = opt;
                sub_opt.seed = opt.seed + i;
                write_meta(sub, sc, sub_opt, 0.0, sub_meta);
                DecayFit f =
                    fit_decay(art.traj.records, "l1", fit_window_lo(sc), fit_window_hi(sc));
                cell.exponent = fmt_double(f.exponent);
                cell.residual = fmt_double(f.residual);
            } catch (const std::exception& e) {
                cell.status = std::string("failed: ") + e.what();
                write_file(sub / "diagnostic.txt", e.what());
            }
        }
    };

    int nthreads = std::max(1, opt.threads);
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::string text = csv_row({"index", "q", "beta", "l1_exponent", "residual", "status"});
    for (std::size_t i = 0; i < cells.size(); ++i) {
        // keep CSV parseable: commas in error strings become semicolons
        std::string status = cells[i].status;
        std::replace(status.begin(), status.end(), ',', ';');
        text += csv_row({std::to_string(i), fmt_double(cells[i].q), fmt_double(cells[i].beta),
                         cells[i].exponent, cells[i].residual, status});
    }
    write_file(dir / "summary.csv", text);
    meta.add("sweep_points", std::to_string(cells.size()));
    return 0;
}

}  // namespace

InitialDatum build_datum(const ExperimentConfig& cfg, const SimConfig& sim, std::uint64_t seed) {
    const DataParams& d = cfg.data;
    InitialDatum base = [&]() -> InitialDatum {
        if (d.kind == "fractional_bump")
            return make_fractional_bump(sim.grid, sim.beta, d.mass, d.width,
                                        d.truncation_radius);
        if (d.kind == "dipole") return make_dipole(sim.grid, d.direction, d.mass, d.width);
        if (d.kind == "miyakawa")
            return make_miyakawa(sim.grid, sim.beta, {d.separation, d.width, d.amplitude});
        if (d.kind == "random") {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> center(-sim.grid.half_width / 8.0,
                                                          sim.grid.half_width / 8.0);
            std::uniform_real_distribution<double> width(0.5 * d.width, 1.5 * d.width);
            std::uniform_real_distribution<double> amp(-1.0, 1.0);
            struct Bump {
                double c, w, a;
            };
            std::vector<Bump> bumps;
            for (int i = 0; i < d.count; ++i) bumps.push_back({center(rng), width(rng), amp(rng)});
            RealField phi = sample(sim.grid, std::function<double(double, double)>(
                                                 [&](double x, double y) {
                                                     double s = 0.0;
                                                     for (const auto& b : bumps) {
                                                         double r2 = (x - b.c) * (x - b.c) + y * y;
                                                         s += b.a * d.mass *
                                                              std::exp(-r2 / (4.0 * b.w * b.w));
                                                     }
                                                     return s;
                                                 }));
            return make_custom(fractional_derivative(phi, sim.beta), sim.beta);
        }
        throw UnsupportedKind("build_datum: unknown data kind '" + d.kind + "'");
    }();
    if (d.scale == 1.0) return base;
    std::optional<double> A;
    if (base.amplitude_A) A = d.scale * *base.amplitude_A;
    return {d.scale * base.field, base.beta, A, base.construction};
}

int run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
    fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    Meta meta;
    auto start = std::chrono::steady_clock::now();
    int status = 0;
    try {
        if (opt.command == "simulate")
            status = cmd_simulate(cfg, opt, dir, meta);
        else if (opt.command == "fit")
            status = cmd_fit(cfg, dir, meta);
        else if (opt.command == "profile-compare")
            status = cmd_profile_compare(cfg, opt, dir, meta);
        else if (opt.command == "oracle-check")
            status = cmd_oracle_check(cfg, opt, dir, meta);
        else if (opt.command == "picard")
            status = cmd_picard(cfg, opt, dir, meta);
        else if (opt.command == "stability")
            status = cmd_stability(cfg, opt, dir, meta);
        else if (opt.command == "sweep")
            status = cmd_sweep(cfg, opt, dir, meta);
        else
            throw Error("unknown command '" + opt.command + "'");
    } catch (const std::exception& e) {
        write_file(dir / "diagnostic.txt", e.what() + std::string("\n"));
        meta.add("error", e.what());
        status = 2;
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_meta(dir, cfg, opt, wall, meta);
    return status;
}

}  // namespace zml
