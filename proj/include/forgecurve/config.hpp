#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "forgecurve/trainer.hpp"

namespace forgecurve {

// Everything a run needs, file representation. The config file is one flat
// JSON object whose keys match the field names documented in the README;
// unknown keys are rejected, missing keys keep their defaults.
struct RunConfig {
    TrainConfig train;
    std::vector<std::uint64_t> seeds = {0};
    std::string out_dir = "runs";
};

RunConfig load_run_config(const std::string& path);

// Applies one `key=value` override; the value is parsed as JSON when
// possible and treated as a bare string otherwise.
void apply_override(RunConfig& cfg, const std::string& assignment);

// The set of recognized flat keys, for error messages and docs.
std::vector<std::string> run_config_keys();

}  // namespace forgecurve
