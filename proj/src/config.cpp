#include "idla/config.hpp"

#include <cstdlib>
#include <thread>

#include "idla/errors.hpp"
#include "idla/site.hpp"

namespace idla {

namespace {

bool known_protocol(const std::string& p) {
    return p == "levels" || p == "clocks" || p == "waves" || p == "truncated-infinite";
}

} // namespace

void ExperimentConfig::validate(const std::string& command) const {
    if (dim < kMinDim || dim > kMaxDim)
        throw ConfigError("dim must lie in [" + std::to_string(kMinDim) + ", " +
                          std::to_string(kMaxDim) + "]");
    if (n < 0) throw ConfigError("n must be non-negative");
    if (replicates < 1) throw ConfigError("replicates must be >= 1");
    if (level < 0) throw ConfigError("level must be non-negative");
    if (max_steps == 0) throw ConfigError("max-steps must be positive");

    const bool randomized = command != "render";
    if (randomized && !seed_set)
        throw ConfigError("command '" + command + "' requires an explicit --seed");

    if (command == "simulate" || command == "stabilize") {
        const std::string proto = command == "stabilize" ? "waves" : protocol;
        if (!known_protocol(proto))
            throw ConfigError("unknown protocol '" + protocol + "'");
        if (proto == "waves") {
            if (alpha < 2) throw ConfigError("waves need alpha >= 2");
            if (level < 1) throw ConfigError("waves need level >= 1");
        }
        if (proto == "truncated-infinite") {
            if (window < 1) throw ConfigError("truncated-infinite needs window >= 1");
            if (alpha < 1) throw ConfigError("alpha must be >= 1");
        }
    }

    if (command == "fluctuations") {
        // the sweep derives W = n and the truncation margin internally
        for (const std::int64_t v : n_sweep)
            if (v < 1) throw ConfigError("n-sweep values must be >= 1");
        if (n_sweep.empty() && n < 1)
            throw ConfigError("fluctuations need --n or --n-sweep");
        if (margin_factor < 0) throw ConfigError("margin-factor must be non-negative");
    }

    if (command == "donuts") {
        if (!(Rat(0) < epsilon) || !(epsilon < Rat(1, 2)))
            throw ConfigError("epsilon must lie in (0, 1/2)");
        if (!(Rat(0) < l0)) throw ConfigError("donuts need --l0 > 0");
        if (!(Rat(static_cast<std::int64_t>(0)) < l0) || !(Rat(level) < l0))
            throw ConfigError("donuts need level < l0");
    }

    if (command == "render" && snapshot.empty())
        throw ConfigError("render needs --snapshot FILE");
}

int ExperimentConfig::effective_threads() const {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("IDLA_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) return t;
    }
    return 1;
}

} // namespace idla
