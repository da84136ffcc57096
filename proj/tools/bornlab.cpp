#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bornlab/cli_config.hpp"
#include "bornlab/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"bornlab - correlator laboratory for quantum circuit Born machines"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int threads = 1;
    bool svg = false;

    auto* run = app.add_subcommand("run", "run an experiment config and write artifacts");
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides [experiment].out)");
    run->add_option("--threads", threads, "worker threads for grid fan-out")
        ->check(CLI::PositiveNumber);
    run->add_flag("--svg", svg, "also render simple SVG plots");

    auto* validate = app.add_subcommand("validate", "parse and validate a config file");
    validate->add_option("config", config_path, "experiment config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = bornlab::cli::Config::parse_file(config_path);
        if (validate->parsed()) {
            bornlab::cli::validate_experiment(cfg);
            std::cout << "ok: " << config_path << "\n";
            return 0;
        }
        bornlab::cli::RunOptions opts;
        opts.out_dir = out_dir;
        opts.threads = threads;
        opts.svg = svg;
        try {
            bornlab::cli::run_experiment(cfg, opts);
        } catch (const bornlab::cli::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 1;
        }
        return 0;
    } catch (const bornlab::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        // config file syntax and key problems surface as runtime_error from the
        // parser; everything after validation is a runtime failure
        const std::string what = e.what();
        if (what.rfind("config:", 0) == 0) {
            std::cerr << "config error: " << what << "\n";
            return 1;
        }
        std::cerr << "error: " << what << "\n";
        return 2;
    }
}
