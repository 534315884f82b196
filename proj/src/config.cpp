#include "zml/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace zml {

std::string fmt_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool consumed = false;
};

using Store = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

Store tokenize(const std::string& text) {
    Store store;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ParseError("line " + std::to_string(lineno) + ": unterminated section");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ParseError("line " + std::to_string(lineno) + ": empty section name");
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ParseError("line " + std::to_string(lineno) + ": key before any [section]");
        store[section][key] = Entry{val, lineno, false};
    }
    return store;
}

class Reader {
  public:
    explicit Reader(Store s) : store_(std::move(s)) {}

    std::optional<std::string> raw(const std::string& sec, const std::string& key) {
        auto s = store_.find(sec);
        if (s == store_.end()) return std::nullopt;
        auto k = s->second.find(key);
        if (k == s->second.end()) return std::nullopt;
        k->second.consumed = true;
        return k->second.value;
    }

    std::string require(const std::string& sec, const std::string& key) {
        auto v = raw(sec, key);
        if (!v) throw MissingRequired("missing required key '" + key + "' in [" + sec + "]");
        return *v;
    }

    double number(const std::string& sec, const std::string& key, const std::string& text) {
        try {
            std::size_t used = 0;
            double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument("trailing junk");
            return v;
        } catch (const std::exception&) {
            throw ParseError("bad numeric value '" + text + "' for [" + sec + "] " + key);
        }
    }

    double get_double(const std::string& sec, const std::string& key, double dflt) {
        auto v = raw(sec, key);
        return v ? number(sec, key, *v) : dflt;
    }

    int get_int(const std::string& sec, const std::string& key, int dflt) {
        double v = get_double(sec, key, dflt);
        int i = static_cast<int>(v);
        if (i != v) throw ParseError("expected integer for [" + sec + "] " + key);
        return i;
    }

    bool get_bool(const std::string& sec, const std::string& key, bool dflt) {
        auto v = raw(sec, key);
        if (!v) return dflt;
        if (*v == "true") return true;
        if (*v == "false") return false;
        throw ParseError("expected true/false for [" + sec + "] " + key);
    }

    std::string get_string(const std::string& sec, const std::string& key,
                           const std::string& dflt) {
        auto v = raw(sec, key);
        return v ? *v : dflt;
    }

    std::vector<double> get_list(const std::string& sec, const std::string& key) {
        auto v = raw(sec, key);
        std::vector<double> out;
        if (!v) return out;
        std::istringstream in(*v);
        std::string item;
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(number(sec, key, item));
        }
        return out;
    }

    std::vector<std::string> get_names(const std::string& sec, const std::string& key,
                                       std::vector<std::string> dflt) {
        auto v = raw(sec, key);
        if (!v) return dflt;
        std::vector<std::string> out;
        std::istringstream in(*v);
        std::string item;
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

    // no silent typo acceptance: every surviving key is an error
    void check_consumed() const {
        for (const auto& [sec, keys] : store_)
            for (const auto& [key, e] : keys)
                if (!e.consumed)
                    throw UnknownKey("line " + std::to_string(e.line) + ": unknown key '" + key +
                                     "' in [" + sec + "]");
    }

  private:
    Store store_;
};

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    Reader r(tokenize(text));
    ExperimentConfig c;

    int dim = r.get_int("grid", "dim", 1);
    double L = r.number("grid", "half_width", r.require("grid", "half_width"));
    int N = r.get_int("grid", "points", 2048);
    c.sim.grid = GridSpec(dim, L, N);

    c.sim.beta = r.number("pde", "beta", r.require("pde", "beta"));
    std::string qtext = r.require("pde", "q");
    c.sim.q = qtext == "critical" ? 1.0 + 1.0 / (dim + c.sim.beta) : r.number("pde", "q", qtext);
    c.sim.a = {r.get_double("pde", "a0", 1.0), r.get_double("pde", "a1", 0.0)};
    std::string flux = r.get_string("pde", "flux", "signed");
    if (flux == "signed")
        c.sim.flux = FluxForm::signed_power;
    else if (flux == "plain")
        c.sim.flux = FluxForm::plain_power;
    else
        throw ParseError("flux must be 'signed' or 'plain', got '" + flux + "'");

    c.data.kind = r.get_string("data", "kind", c.data.kind);
    if (c.data.kind != "fractional_bump" && c.data.kind != "dipole" &&
        c.data.kind != "miyakawa" && c.data.kind != "random")
        throw ParseError("unknown data kind '" + c.data.kind + "'");
    c.data.mass = r.get_double("data", "mass", c.data.mass);
    c.data.width = r.get_double("data", "width", c.data.width);
    if (auto v = r.raw("data", "truncation_radius"))
        c.data.truncation_radius = r.number("data", "truncation_radius", *v);
    c.data.direction = r.get_int("data", "direction", c.data.direction);
    c.data.separation = r.get_double("data", "separation", c.data.separation);
    c.data.amplitude = r.get_double("data", "amplitude", c.data.amplitude);
    c.data.scale = r.get_double("data", "scale", c.data.scale);
    c.data.count = r.get_int("data", "count", c.data.count);

    c.sim.t0 = r.get_double("run", "t0", 0.0);
    c.sim.T = r.number("run", "horizon", r.require("run", "horizon"));
    c.sim.dt = r.number("run", "dt", r.require("run", "dt"));
    std::string scheme = r.get_string("run", "scheme", "ifrk4");
    if (scheme == "ifrk4")
        c.sim.scheme = Scheme::IFRK4;
    else if (scheme == "etdrk2")
        c.sim.scheme = Scheme::ETDRK2;
    else
        throw ParseError("scheme must be 'ifrk4' or 'etdrk2', got '" + scheme + "'");
    c.sim.sample_count = r.get_int("run", "samples", c.sim.sample_count);
    c.sim.pad_factor = r.get_int("run", "pad_factor", c.sim.pad_factor);
    c.sim.blowup_factor = r.get_double("run", "blowup_factor", c.sim.blowup_factor);
    c.sim.waive_box_check = r.get_bool("run", "waive_box_check", c.sim.waive_box_check);
    c.sim.p_extra = r.get_list("run", "p_extra");

    if (auto v = r.raw("analysis", "window_lo"))
        c.analysis.window_lo = r.number("analysis", "window_lo", *v);
    if (auto v = r.raw("analysis", "window_hi"))
        c.analysis.window_hi = r.number("analysis", "window_hi", *v);
    c.analysis.fit_norms = r.get_names("analysis", "fit_norms", c.analysis.fit_norms);
    c.analysis.profile_p = r.get_double("analysis", "profile_p", c.analysis.profile_p);
    c.analysis.emit_plot = r.get_bool("analysis", "emit_plot", c.analysis.emit_plot);

    c.picard.iterations = r.get_int("picard", "iterations", c.picard.iterations);
    c.picard.time_points = r.get_int("picard", "time_points", c.picard.time_points);
    c.picard.sigma_nodes = r.get_int("picard", "sigma_nodes", c.picard.sigma_nodes);
    c.picard.waive_critical = r.get_bool("picard", "waive_critical", c.picard.waive_critical);

    c.oracle.nodes = r.get_int("oracle", "nodes", c.oracle.nodes);
    c.oracle.rule = r.get_string("oracle", "rule", c.oracle.rule);
    if (c.oracle.rule != "gauss" && c.oracle.rule != "trapezoid")
        throw ParseError("oracle rule must be 'gauss' or 'trapezoid'");
    c.oracle.truncation_radius =
        r.get_double("oracle", "truncation_radius", c.oracle.truncation_radius);
    if (auto v = r.raw("oracle", "times")) {
        c.oracle.times.clear();
        std::istringstream in(*v);
        std::string item;
        while (std::getline(in, item, ','))
            c.oracle.times.push_back(r.number("oracle", "times", trim(item)));
    }
    c.oracle.tolerance = r.get_double("oracle", "tolerance", c.oracle.tolerance);

    c.stability.perturbation =
        r.get_string("stability", "perturbation", c.stability.perturbation);
    if (c.stability.perturbation != "dipole" && c.stability.perturbation != "scale")
        throw ParseError("stability perturbation must be 'dipole' or 'scale'");
    c.stability.perturbation_mass =
        r.get_double("stability", "perturbation_mass", c.stability.perturbation_mass);
    c.stability.perturbation_width =
        r.get_double("stability", "perturbation_width", c.stability.perturbation_width);
    c.stability.control = r.get_bool("stability", "control", c.stability.control);

    c.sweep.q_values = r.get_list("sweep", "q");
    c.sweep.beta_values = r.get_list("sweep", "beta");

    r.check_consumed();
    c.sim.validate();
    return c;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string ExperimentConfig::normalized_dump() const {
    std::ostringstream o;
    o << "[grid]\n";
    o << "dim = " << sim.grid.dim << "\n";
    o << "half_width = " << fmt_double(sim.grid.half_width) << "\n";
    o << "points = " << sim.grid.points_per_dim << "\n";
    o << "\n[pde]\n";
    o << "q = " << fmt_double(sim.q) << "\n";
    o << "beta = " << fmt_double(sim.beta) << "\n";
    o << "a0 = " << fmt_double(sim.a[0]) << "\n";
    o << "a1 = " << fmt_double(sim.a[1]) << "\n";
    o << "flux = " << (sim.flux == FluxForm::signed_power ? "signed" : "plain") << "\n";
    o << "\n[data]\n";
    o << "kind = " << data.kind << "\n";
    o << "mass = " << fmt_double(data.mass) << "\n";
    o << "width = " << fmt_double(data.width) << "\n";
    if (data.truncation_radius)
        o << "truncation_radius = " << fmt_double(*data.truncation_radius) << "\n";
    o << "direction = " << data.direction << "\n";
    o << "separation = " << fmt_double(data.separation) << "\n";
    o << "amplitude = " << fmt_double(data.amplitude) << "\n";
    o << "scale = " << fmt_double(data.scale) << "\n";
    o << "count = " << data.count << "\n";
    o << "\n[run]\n";
    o << "t0 = " << fmt_double(sim.t0) << "\n";
    o << "horizon = " << fmt_double(sim.T) << "\n";
    o << "dt = " << fmt_double(sim.dt) << "\n";
    o << "scheme = " << (sim.scheme == Scheme::IFRK4 ? "ifrk4" : "etdrk2") << "\n";
    o << "samples = " << sim.sample_count << "\n";
    o << "pad_factor = " << sim.pad_factor << "\n";
    o << "blowup_factor = " << fmt_double(sim.blowup_factor) << "\n";
    o << "waive_box_check = " << (sim.waive_box_check ? "true" : "false") << "\n";
    if (!sim.p_extra.empty()) {
        o << "p_extra = ";
        for (std::size_t i = 0; i < sim.p_extra.size(); ++i)
            o << (i ? "," : "") << fmt_double(sim.p_extra[i]);
        o << "\n";
    }
    o << "\n[analysis]\n";
    if (analysis.window_lo) o << "window_lo = " << fmt_double(*analysis.window_lo) << "\n";
    if (analysis.window_hi) o << "window_hi = " << fmt_double(*analysis.window_hi) << "\n";
    o << "fit_norms = ";
    for (std::size_t i = 0; i < analysis.fit_norms.size(); ++i)
        o << (i ? "," : "") << analysis.fit_norms[i];
    o << "\n";
    o << "profile_p = " << fmt_double(analysis.profile_p) << "\n";
    o << "emit_plot = " << (analysis.emit_plot ? "true" : "false") << "\n";
    o << "\n[picard]\n";
    o << "iterations = " << picard.iterations << "\n";
    o << "time_points = " << picard.time_points << "\n";
    o << "sigma_nodes = " << picard.sigma_nodes << "\n";
    o << "waive_critical = " << (picard.waive_critical ? "true" : "false") << "\n";
    o << "\n[oracle]\n";
    o << "nodes = " << oracle.nodes << "\n";
    o << "rule = " << oracle.rule << "\n";
    o << "truncation_radius = " << fmt_double(oracle.truncation_radius) << "\n";
    o << "times = ";
    for (std::size_t i = 0; i < oracle.times.size(); ++i)
        o << (i ? "," : "") << fmt_double(oracle.times[i]);
    o << "\n";
    o << "tolerance = " << fmt_double(oracle.tolerance) << "\n";
    o << "\n[stability]\n";
    o << "perturbation = " << stability.perturbation << "\n";
    o << "perturbation_mass = " << fmt_double(stability.perturbation_mass) << "\n";
    o << "perturbation_width = " << fmt_double(stability.perturbation_width) << "\n";
    o << "control = " << (stability.control ? "true" : "false") << "\n";
    if (!sweep.q_values.empty() || !sweep.beta_values.empty()) {
        o << "\n[sweep]\n";
        if (!sweep.q_values.empty()) {
            o << "q = ";
            for (std::size_t i = 0; i < sweep.q_values.size(); ++i)
                o << (i ? "," : "") << fmt_double(sweep.q_values[i]);
            o << "\n";
        }
        if (!sweep.beta_values.empty()) {
            o << "beta = ";
            for (std::size_t i = 0; i < sweep.beta_values.size(); ++i)
                o << (i ? "," : "") << fmt_double(sweep.beta_values[i]);
            o << "\n";
        }
    }
    return o.str();
}

}  // namespace zml
