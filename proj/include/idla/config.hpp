#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idla/rational.hpp"

namespace idla {

// One experiment description: filled from key=value config files and CLI
// flags, validated once per command.
struct ExperimentConfig {
    int dim = 3;
    std::int64_t n = 1;
    std::int64_t level = 0;   // M
    std::int64_t window = -1; // W, truncated-infinite protocol
    std::int64_t alpha = 2;
    std::int64_t margin = 0;
    std::int64_t waves = -1; // J; -1 means no waves
    Rat epsilon{1, 10};
    Rat l0{0, 1}; // donut outer radius
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::int64_t replicates = 1;
    std::string protocol = "levels";
    std::string out_dir = "out";
    std::int64_t samples = 100'000;
    std::vector<std::int64_t> n_sweep;
    double margin_factor = 1.5; // fluctuation sweeps: margin = round(factor * n)
    std::string snapshot;
    std::string style = "surface";
    std::int64_t render_window = -1;
    int threads = 0; // 0: IDLA_THREADS or 1
    std::uint64_t max_steps = 100'000'000ull;

    // throws ConfigError on an invalid combination for the given command
    void validate(const std::string& command) const;

    int effective_threads() const;
};

} // namespace idla
