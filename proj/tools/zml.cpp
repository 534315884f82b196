#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "zml/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"zml - pseudospectral convection-diffusion experiment runner"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    int threads = 1;

    const char* commands[] = {"simulate",     "sweep",  "fit",      "profile-compare",
                              "oracle-check", "picard", "stability"};
    for (const char* name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--seed", seed, "seed for randomized data");
        sub->add_option("--threads", threads, "sweep parallelism");
    }

    CLI11_PARSE(app, argc, argv);

    zml::RunOptions opt;
    opt.command = app.get_subcommands().front()->get_name();
    opt.out_dir = out_dir;
    opt.seed = seed;
    opt.threads = threads;

    try {
        zml::ExperimentConfig cfg = zml::parse_config(config_path);
        int status = zml::run_experiment(cfg, opt);
        if (status != 0) std::cerr << "zml: " << opt.command << " failed (see diagnostic.txt)\n";
        return status;
    } catch (const std::exception& e) {
        std::cerr << "zml: " << e.what() << "\n";
        return 2;
    }
}
