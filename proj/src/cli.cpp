#include "idla/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "idla/donut.hpp"
#include "idla/errors.hpp"
#include "idla/exit_oracle.hpp"
#include "idla/lattice.hpp"
#include "idla/render.hpp"
#include "idla/snapshot.hpp"
#include "idla/stats.hpp"

namespace idla {

namespace {

namespace fs = std::filesystem;

std::string replicate_name(const char* prefix, std::int64_t rep) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%05lld.ndjson", prefix, static_cast<long long>(rep));
    return buf;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

BuildReport build_for(const ExperimentConfig& c, const std::string& proto, std::int64_t rep) {
    RngKey key{c.seed, static_cast<std::uint32_t>(rep)};
    BuildOpts opts;
    opts.max_steps = c.max_steps;
    if (proto == "levels") return build_A_n_M(c.n, c.level, c.dim, key, opts);
    if (proto == "clocks") return build_A_n_M_clocks(c.n, c.level, c.dim, key, opts);
    if (proto == "waves") return build_waves(c.n, c.level, c.alpha, c.waves, c.dim, key, opts);
    if (proto == "truncated-infinite")
        return build_truncated_infinite(c.n, c.window, c.alpha, c.margin, c.dim, key, opts);
    throw ConfigError("unknown protocol '" + proto + "'");
}

std::int64_t top_level_of(const ExperimentConfig& c, const std::string& proto) {
    if (proto == "waves") return (c.waves + 2) * ipow(c.level, c.alpha);
    if (proto == "truncated-infinite") return ipow(c.window, c.alpha) + c.margin;
    return c.level;
}

} // namespace

void parallel_replicates(std::int64_t replicates, int threads,
                         const std::function<void(std::int64_t)>& fn) {
    if (threads <= 1 || replicates <= 1) {
        for (std::int64_t r = 0; r < replicates; ++r) fn(r);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&]() {
        while (true) {
            const std::int64_t r = next.fetch_add(1);
            if (r >= replicates) return;
            try {
                fn(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = static_cast<int>(std::min<std::int64_t>(threads, replicates));
    pool.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

int cmd_simulate(const ExperimentConfig& config) {
    config.validate("simulate");
    fs::create_directories(config.out_dir);

    parallel_replicates(config.replicates, config.effective_threads(), [&](std::int64_t rep) {
        BuildReport report = build_for(config, config.protocol, rep);

        SnapshotHeader header;
        header.dimension = config.dim;
        header.n = config.n;
        header.M = top_level_of(config, config.protocol);
        header.seed = config.seed;
        header.protocol = report.protocol;
        save_snapshot((fs::path(config.out_dir) / replicate_name("snapshot", rep)).string(),
                      report.aggregate, header);

        std::string body;
        {
            nlohmann::json row;
            row["kind"] = "build";
            row["replicate"] = rep;
            row["protocol"] = report.protocol;
            row["dimension"] = config.dim;
            row["n"] = config.n;
            row["M"] = header.M;
            row["seed"] = config.seed;
            row["particles"] = report.particles_launched;
            row["count"] = report.aggregate.size();
            body += row.dump();
            body += '\n';
        }
        for (const WaveStat& w : report.per_wave) {
            nlohmann::json row;
            row["kind"] = "wave";
            row["replicate"] = rep;
            row["j"] = w.j;
            row["sources"] = w.sources;
            row["particles"] = w.particles;
            row["strip_visits"] = w.strip_visits;
            body += row.dump();
            body += '\n';
        }
        if (report.protocol == "truncated-infinite") {
            nlohmann::json row;
            row["kind"] = "truncation";
            row["replicate"] = rep;
            row["level"] = report.telemetry.level;
            row["window"] = report.telemetry.window;
            row["boundary_particles"] = report.telemetry.boundary_particles;
            row["boundary_visits"] = report.telemetry.boundary_visits;
            row["visit_rate"] = report.telemetry.boundary_particles > 0
                                    ? static_cast<double>(report.telemetry.boundary_visits) /
                                          static_cast<double>(report.telemetry.boundary_particles)
                                    : 0.0;
            body += row.dump();
            body += '\n';
        }
        atomic_write_text((fs::path(config.out_dir) / replicate_name("report", rep)).string(), body);
    });
    return 0;
}

int cmd_donuts(const ExperimentConfig& config) {
    config.validate("donuts");
    fs::create_directories(config.out_dir);

    const DonutFamily fam(config.l0, Rat(config.level), config.epsilon);
    const ConeSpec cone(config.epsilon);
    const std::vector<Site> starts = sources_at_level(config.l0.floor(), config.dim);
    const RngKey key{config.seed, 0};
    const CrossingReport report =
        mc_crossing_experiment(fam, cone, starts, config.replicates, key, config.max_steps);

    std::string csv = "i,empirical_p,ci_low,ci_high,bound\n";
    for (const CrossingRow& row : report.rows) {
        csv += std::to_string(row.i) + ',' + format_double(row.empirical_p) + ',' +
               format_double(row.ci_low) + ',' + format_double(row.ci_high) + ',' +
               format_double(row.bound) + '\n';
    }
    atomic_write_text((fs::path(config.out_dir) / "crossings.csv").string(), csv);

    nlohmann::json meta;
    meta["kind"] = "crossing_meta";
    meta["k"] = report.k;
    meta["donut_count"] = report.donut_count;
    meta["reps"] = report.reps;
    meta["epsilon"] = std::to_string(config.epsilon.num) + "/" + std::to_string(config.epsilon.den);
    atomic_write_text((fs::path(config.out_dir) / "crossings.ndjson").string(), meta.dump() + "\n");
    return 0;
}

int cmd_stabilize(const ExperimentConfig& config) {
    config.validate("stabilize");
    fs::create_directories(config.out_dir);

    const std::int64_t J = config.waves < 0 ? 0 : config.waves;
    std::vector<std::vector<WaveFraction>> all(static_cast<std::size_t>(config.replicates));
    parallel_replicates(config.replicates, config.effective_threads(), [&](std::int64_t rep) {
        RngKey key{config.seed, static_cast<std::uint32_t>(rep)};
        BuildOpts opts;
        opts.max_steps = config.max_steps;
        const BuildReport report =
            build_waves(config.n, config.level, config.alpha, J, config.dim, key, opts);
        all[static_cast<std::size_t>(rep)] = stabilization_rate(report, config.level);
    });

    std::string body;
    for (std::int64_t rep = 0; rep < config.replicates; ++rep) {
        for (const WaveFraction& f : all[static_cast<std::size_t>(rep)]) {
            nlohmann::json row;
            row["kind"] = "stabilization";
            row["replicate"] = rep;
            row["j"] = f.j;
            row["sources"] = f.sources;
            row["particles"] = f.particles;
            row["strip_visits"] = f.strip_visits;
            row["visit_fraction"] = f.visit_fraction;
            row["event"] = f.event;
            body += row.dump();
            body += '\n';
        }
    }
    atomic_write_text((fs::path(config.out_dir) / "stabilization.ndjson").string(), body);

    std::string csv = "j,replicates,event_fraction,mean_visit_fraction\n";
    for (std::int64_t j = 0; j <= J; ++j) {
        std::int64_t events = 0;
        double fraction_sum = 0;
        for (const auto& waves : all) {
            const WaveFraction& f = waves[static_cast<std::size_t>(j)];
            events += f.event ? 1 : 0;
            fraction_sum += f.visit_fraction;
        }
        csv += std::to_string(j) + ',' + std::to_string(config.replicates) + ',' +
               format_double(static_cast<double>(events) / static_cast<double>(config.replicates)) +
               ',' + format_double(fraction_sum / static_cast<double>(config.replicates)) + '\n';
    }
    atomic_write_text((fs::path(config.out_dir) / "stabilization.csv").string(), csv);
    return 0;
}

int cmd_fluctuations(const ExperimentConfig& config) {
    config.validate("fluctuations");
    fs::create_directories(config.out_dir);

    std::vector<std::int64_t> sweep = config.n_sweep;
    if (sweep.empty()) sweep.push_back(config.n);

    std::string csv = "n,W,delta_inner,delta_outer,norm_inner,norm_outer\n";
    std::string body;
    for (const std::int64_t n : sweep) {
        const std::int64_t W = n; // measurement strip fixed at exponent 1
        const std::int64_t margin =
            static_cast<std::int64_t>(std::llround(config.margin_factor * static_cast<double>(n)));
        std::vector<FluctuationReport> reports(static_cast<std::size_t>(config.replicates));
        parallel_replicates(config.replicates, config.effective_threads(), [&](std::int64_t rep) {
            RngKey key{config.seed, static_cast<std::uint32_t>(rep)};
            BuildOpts opts;
            opts.max_steps = config.max_steps;
            const BuildReport report =
                build_truncated_infinite(n, W, 1, margin, config.dim, key, opts);
            reports[static_cast<std::size_t>(rep)] = fluctuation(report.aggregate, n, W);
        });
        for (std::int64_t rep = 0; rep < config.replicates; ++rep) {
            const FluctuationReport& f = reports[static_cast<std::size_t>(rep)];
            csv += std::to_string(f.n) + ',' + std::to_string(f.W) + ',' +
                   std::to_string(f.delta_inner) + ',' + std::to_string(f.delta_outer) + ',' +
                   format_double(f.norm_inner) + ',' + format_double(f.norm_outer) + '\n';
            nlohmann::json row;
            row["kind"] = "fluctuation";
            row["replicate"] = rep;
            row["n"] = f.n;
            row["W"] = f.W;
            row["delta_inner"] = f.delta_inner;
            row["delta_outer"] = f.delta_outer;
            row["norm_inner"] = f.norm_inner;
            row["norm_outer"] = f.norm_outer;
            body += row.dump();
            body += '\n';
        }
    }
    atomic_write_text((fs::path(config.out_dir) / "fluctuations.csv").string(), csv);
    atomic_write_text((fs::path(config.out_dir) / "fluctuations.ndjson").string(), body);
    return 0;
}

int cmd_oracle_check(const ExperimentConfig& config) {
    config.validate("oracle-check");
    fs::create_directories(config.out_dir);

    struct Case {
        std::string name;
        int dim;
        std::vector<Site> sites;
        Site start;
    };
    std::vector<Case> cases;

    auto ball_sites = [](int d, std::int64_t r) {
        std::vector<Site> out;
        Site z = Site::zero(d);
        std::function<void(int)> rec = [&](int axis) {
            if (axis == d) {
                out.push_back(z);
                return;
            }
            for (std::int64_t v = -r; v <= r; ++v) {
                z[axis] = static_cast<Coord>(v);
                rec(axis + 1);
            }
        };
        rec(0);
        return out;
    };

    cases.push_back({"origin_d2", 2, {Site{0, 0}}, Site{0, 0}});
    cases.push_back({"pair_d2", 2, {Site{0, 0}, Site{1, 0}}, Site{0, 0}});
    cases.push_back({"segment_d2", 2, {Site{0, 0}, Site{1, 0}, Site{2, 0}}, Site{1, 0}});
    cases.push_back({"ball2_d2", 2, ball_sites(2, 2), Site{0, 0}});
    cases.push_back({"ball5_d2", 2, ball_sites(2, 5), Site{1, 1}});
    cases.push_back({"ball12_d2", 2, ball_sites(2, 12), Site{0, 0}});
    cases.push_back({"origin_d3", 3, {Site{0, 0, 0}}, Site{0, 0, 0}});
    cases.push_back({"ball1_d3", 3, ball_sites(3, 1), Site{0, 0, 0}});
    cases.push_back({"ball2_d3", 3, ball_sites(3, 2), Site{0, 0, 0}});
    {
        // slab patch: |x| <= 1 over a 5x5 window, 75 sites
        std::vector<Site> sites;
        for (std::int64_t x = -1; x <= 1; ++x)
            for (std::int64_t y = -2; y <= 2; ++y)
                for (std::int64_t w = -2; w <= 2; ++w)
                    sites.push_back(Site{static_cast<Coord>(x), static_cast<Coord>(y),
                                         static_cast<Coord>(w)});
        cases.push_back({"slab_d3", 3, sites, Site{0, 0, 0}});
    }

    std::string csv = "case,sites,samples,tv\n";
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const Case& c = cases[ci];
        const ExitDistribution exact = exact_exit_distribution(c.sites, c.start);
        const Aggregate agg = aggregate_from_sites(c.dim, c.sites);
        const RngKey key{config.seed, static_cast<std::uint32_t>(ci)};
        const ExitDistribution mc = sample_exit_distribution(
            agg, c.start, static_cast<std::size_t>(config.samples), key,
            static_cast<std::uint32_t>(ci));
        const double tv = total_variation(exact, mc);
        csv += c.name + ',' + std::to_string(c.sites.size()) + ',' +
               std::to_string(config.samples) + ',' + format_double(tv) + '\n';
    }
    atomic_write_text((fs::path(config.out_dir) / "oracle.csv").string(), csv);
    return 0;
}

int cmd_render(const ExperimentConfig& config) {
    config.validate("render");
    fs::create_directories(config.out_dir);

    auto [agg, header] = load_snapshot(config.snapshot);
    const std::int64_t window = config.render_window >= 0 ? config.render_window : header.M;
    render_ppm_file((fs::path(config.out_dir) / "render.ppm").string(), agg, header.n, window,
                    config.style);
    return 0;
}

int run_command(const std::string& command, const ExperimentConfig& config) {
    if (command == "simulate") return cmd_simulate(config);
    if (command == "donuts") return cmd_donuts(config);
    if (command == "stabilize") return cmd_stabilize(config);
    if (command == "fluctuations") return cmd_fluctuations(config);
    if (command == "oracle-check") return cmd_oracle_check(config);
    if (command == "render") return cmd_render(config);
    throw ConfigError("unknown command '" + command + "'");
}

} // namespace idla
