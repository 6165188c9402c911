#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "idla/cli.hpp"
#include "idla/errors.hpp"

namespace {

struct RawOptions {
    std::string epsilon = "1/10";
    std::string l0 = "0";
};

void add_common(CLI::App* sub, idla::ExperimentConfig& cfg, RawOptions& raw) {
    sub->set_config("--config", "", "key=value experiment file; flags override");
    sub->add_option_function<std::uint64_t>(
           "--seed",
           [&cfg](const std::uint64_t& s) {
               cfg.seed = s;
               cfg.seed_set = true;
           },
           "root seed (required for randomized commands)");
    sub->add_option("--dim", cfg.dim, "lattice dimension d >= 2");
    sub->add_option("--n", cfg.n, "particles per source");
    sub->add_option("--level", cfg.level, "level parameter M");
    sub->add_option("--window", cfg.window, "trusted strip half-width W");
    sub->add_option("--alpha", cfg.alpha, "truncation/wave exponent");
    sub->add_option("--margin", cfg.margin, "extra levels above W^alpha");
    sub->add_option("--waves", cfg.waves, "number of waves J (waves protocol)");
    sub->add_option("--epsilon", raw.epsilon, "cone angle as P/Q");
    sub->add_option("--l0", raw.l0, "donut outer radius (rational)");
    sub->add_option("--replicates", cfg.replicates, "independent replicates");
    sub->add_option("--protocol", cfg.protocol, "levels|clocks|waves|truncated-infinite");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--samples", cfg.samples, "Monte Carlo samples (oracle-check)");
    sub->add_option("--n-sweep", cfg.n_sweep, "comma separated n values (fluctuations)")
        ->delimiter(',');
    sub->add_option("--margin-factor", cfg.margin_factor,
                    "fluctuations: margin = round(factor * n)");
    sub->add_option("--snapshot", cfg.snapshot, "snapshot file (render)");
    sub->add_option("--style", cfg.style, "render style: surface|slice");
    sub->add_option("--render-window", cfg.render_window, "render window half-width");
    sub->add_option("--threads", cfg.threads, "worker pool size (or IDLA_THREADS)");
    sub->add_option("--max-steps", cfg.max_steps, "per-walk step budget");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperplane-source internal DLA: simulation and measurement"};
    app.require_subcommand(1);

    idla::ExperimentConfig cfg;
    RawOptions raw;

    const char* names[] = {"simulate", "donuts", "stabilize", "fluctuations",
                           "oracle-check", "render"};
    const char* descriptions[] = {
        "build aggregates and write snapshots/reports",
        "donut-crossing Monte Carlo with Wilson intervals",
        "wave builds with strip-visit statistics",
        "slab-deviation table over an n sweep",
        "Monte Carlo vs exact exit-law total variation",
        "snapshot to PPM image",
    };
    for (std::size_t i = 0; i < 6; ++i) add_common(app.add_subcommand(names[i], descriptions[i]), cfg, raw);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cfg.epsilon = idla::parse_rational(raw.epsilon);
        cfg.l0 = idla::parse_rational(raw.l0);
        for (const char* name : names)
            if (app.get_subcommand(name)->parsed()) return idla::run_command(name, cfg);
        std::fprintf(stderr, "no command given\n");
        return 2;
    } catch (const idla::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const idla::StepBudgetExceeded& e) {
        std::fprintf(stderr, "step budget exceeded: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
