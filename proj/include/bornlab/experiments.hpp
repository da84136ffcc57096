#pragma once

#include <stdexcept>
#include <string>

#include "bornlab/cli_config.hpp"

namespace bornlab::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    std::string out_dir;  // empty -> [experiment].out, default "results"
    int threads = 1;
    bool svg = false;
};

// parses and fully validates the config without running anything heavy
void validate_experiment(const Config& cfg);

// runs the experiment and writes CSV artifacts plus metadata.json
void run_experiment(const Config& cfg, const RunOptions& opts);

}  // namespace bornlab::cli
