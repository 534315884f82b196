#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zml/evolution.hpp"

namespace zml {

struct DataParams {
    std::string kind = "fractional_bump";  // fractional_bump | dipole | miyakawa | random
    double mass = 1.0;
    double width = 1.0;
    std::optional<double> truncation_radius;
    int direction = 0;
    double separation = 2.0;
    double amplitude = 1.0;  // miyakawa bump height
    double scale = 1.0;      // final multiplier on the datum
    int count = 3;           // random: number of mixture bumps
};

struct AnalysisParams {
    std::optional<double> window_lo;  // default: last decade of the run
    std::optional<double> window_hi;
    std::vector<std::string> fit_norms{"l1"};
    double profile_p = 1.0;
    bool emit_plot = true;
};

struct PicardParams {
    int iterations = 8;
    int time_points = 16;
    int sigma_nodes = 64;
    bool waive_critical = false;
};

struct OracleParams {
    int nodes = 256;
    std::string rule = "gauss";  // gauss | trapezoid
    double truncation_radius = 60.0;
    std::vector<double> times{1.0};
    double tolerance = 1e-5;
};

struct StabilityParams {
    std::string perturbation = "dipole";  // dipole | scale
    double perturbation_mass = 0.01;
    double perturbation_width = 1.0;
    bool control = true;  // also run the v0 = 2 u0 hypothesis-violating pair
};

struct SweepParams {
    std::vector<double> q_values;
    std::vector<double> beta_values;
};

struct ExperimentConfig {
    SimConfig sim;
    DataParams data;
    AnalysisParams analysis;
    PicardParams picard;
    OracleParams oracle;
    StabilityParams stability;
    SweepParams sweep;

    // canonical dump: parseable, fixed key order, resolved values
    std::string normalized_dump() const;
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// shortest round-trip decimal representation of a binary64
std::string fmt_double(double v);

}  // namespace zml
