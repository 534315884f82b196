#pragma once

#include <cstdint>
#include <string>

#include "zml/config.hpp"
#include "zml/initial_data.hpp"

namespace zml {

struct RunOptions {
    std::string command;  // simulate | sweep | fit | profile-compare | oracle-check |
                          // picard | stability
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 1;
};

// Builds the configured initial datum on the configured grid; `seed` feeds
// the random mixture kind only.
InitialDatum build_datum(const ExperimentConfig& cfg, const SimConfig& sim, std::uint64_t seed);

// Executes one command, writing all artifacts into opt.out_dir.
// Returns a process exit status; failures leave a diagnostic.txt behind.
int run_experiment(const ExperimentConfig& cfg, const RunOptions& opt);

}  // namespace zml
