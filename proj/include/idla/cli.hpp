#pragma once

#include <functional>
#include <string>

#include "idla/config.hpp"

namespace idla {

// Subcommand bodies; each is a pure function of (config, seed) and writes
// deterministic files under config.out_dir. They return the process exit
// code (0 on success); argument errors throw ConfigError (exit 2) and step
// budget violations StepBudgetExceeded (exit 3).
int cmd_simulate(const ExperimentConfig& config);
int cmd_donuts(const ExperimentConfig& config);
int cmd_stabilize(const ExperimentConfig& config);
int cmd_fluctuations(const ExperimentConfig& config);
int cmd_oracle_check(const ExperimentConfig& config);
int cmd_render(const ExperimentConfig& config);

// Runs fn(0..replicates-1) on a small worker pool; replicates own their
// outputs, so results are identical for any pool size.
void parallel_replicates(std::int64_t replicates, int threads,
                         const std::function<void(std::int64_t)>& fn);

int run_command(const std::string& command, const ExperimentConfig& config);

} // namespace idla
