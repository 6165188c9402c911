#include "idla/aggregate.hpp"

#include <algorithm>
#include <stdexcept>

#include "idla/errors.hpp"
#include "idla/lattice.hpp"
#include "idla/walk.hpp"

namespace idla {

namespace {

void check_build_args(std::int64_t n, std::int64_t level, int d) {
    if (d < kMinDim || d > kMaxDim) throw DimensionMismatch("dimension out of range");
    if (n < 0) throw ConfigError("n must be non-negative");
    if (level < 0) throw ConfigError("level must be non-negative");
}

// Box for the dense backend: the aggregate is a slab around the source plane,
// so x gets a thickness-plus-overshoot budget and the other axes the top
// level plus the same slack. Sites escaping the box land in the hash spill.
Aggregate make_aggregate(std::int64_t n, std::int64_t top_level, int d, const BuildOpts& opts) {
    check_build_args(n, std::max<std::int64_t>(top_level, 0), d);
    const std::size_t expected =
        static_cast<std::size_t>(n) * static_cast<std::size_t>(ipow(2 * top_level + 1, d - 1));
    const std::size_t lines = static_cast<std::size_t>(ipow(2 * (top_level + 8) + 1, d - 1));
    if (!opts.dense_storage || top_level < 0)
        return Aggregate(d, expected, lines);
    const std::int64_t bx = std::max<std::int64_t>(n / 2 + 48, 64);
    const std::int64_t by = top_level + 2 * bx;
    Site lo = Site::zero(d), hi = Site::zero(d);
    lo[0] = static_cast<Coord>(-bx);
    hi[0] = static_cast<Coord>(bx);
    for (int i = 1; i < d; ++i) {
        lo[i] = static_cast<Coord>(-by);
        hi[i] = static_cast<Coord>(by);
    }
    return Aggregate(d, lo, hi, expected, lines);
}


} // namespace

Aggregate smash_sum(const Aggregate& A, const Site& z, RngStream stream, std::uint64_t max_steps) {
    Aggregate out = A;
    WalkOpts opts;
    opts.max_steps = max_steps;
    const ParticleTrace tr = run_until_exit(A, z, std::move(stream), opts);
    if (!out.insert(tr.exit_site))
        throw std::logic_error("smash sum settled on an occupied site");
    return out;
}

LevelBuilder::LevelBuilder(std::int64_t n, int d, const RngKey& key, const BuildOpts& opts,
                           std::int64_t expected_top_level)
    : n_(n),
      d_(d),
      key_(key),
      opts_(opts),
      report_{make_aggregate(n, expected_top_level, d, opts)} {
    check_build_args(n, std::max<std::int64_t>(expected_top_level, 0), d);
}

void LevelBuilder::extend_to(std::int64_t M) {
    fire_levels(next_level_, M, nullptr, nullptr);
}

void LevelBuilder::fire_levels(std::int64_t from, std::int64_t to, std::int64_t* strip_visits,
                               std::int64_t* particles_tracked) {
    if (from != next_level_) throw ConfigError("levels must be fired contiguously");
    Aggregate& agg = report_.aggregate;

    WalkOpts wopts;
    wopts.record_path = opts_.record_traces && opts_.record_paths;
    wopts.strip_bound =
        (strip_visits != nullptr || opts_.record_traces) ? opts_.strip_bound : -1;
    wopts.max_steps = opts_.max_steps;

    struct Pending {
        Site pos;
        std::uint64_t key;
        RngStream stream;
        bool visited = false;
        std::uint64_t steps = 0;
    };
    std::vector<Pending> batch;

    auto flush_batch = [&]() {
        for (Pending& p : batch) {
            // resume until the exit site is free in the live aggregate
            while (agg.contains(p.pos, p.key))
                detail::advance_until_exit(agg, p.pos, p.key, p.stream, wopts.strip_bound,
                                           p.visited, wopts.max_steps, p.steps);
            if (!agg.insert(p.pos))
                throw std::logic_error("particle settled on an occupied site");
            ++report_.particles_launched;
            if (p.visited) {
                if (strip_visits) ++*strip_visits;
            }
            if (particles_tracked) ++*particles_tracked;
        }
        batch.clear();
    };

    for (std::int64_t level = from; level <= to; ++level) {
        for_each_source_at_level(level, d_, [&](const Site& src) {
            const std::uint32_t src_idx = next_source_++;
            for (std::int64_t i = 0; i < n_; ++i) {
                RngStream stream(key_, Purpose::Walk, src_idx, static_cast<std::uint32_t>(i));
                if (opts_.batch > 0) {
                    Pending p{src, agg.packer().pack(src), std::move(stream), false, 0};
                    detail::advance_until_exit(agg, p.pos, p.key, p.stream, wopts.strip_bound,
                                               p.visited, wopts.max_steps, p.steps);
                    batch.push_back(std::move(p));
                    if (batch.size() >= static_cast<std::size_t>(opts_.batch)) flush_batch();
                } else {
                    ParticleTrace tr = run_until_exit(agg, src, std::move(stream), wopts);
                    if (!agg.insert(tr.exit_site))
                        throw std::logic_error("particle settled on an occupied site");
                    ++report_.particles_launched;
                    if (tr.strip_tracked && tr.visited_strip && strip_visits) ++*strip_visits;
                    if (particles_tracked) ++*particles_tracked;
                    if (opts_.record_traces) report_.traces.push_back(std::move(tr));
                }
            }
        });
    }
    flush_batch();
    next_level_ = to + 1;
}

BuildReport build_A_n_M(std::int64_t n, std::int64_t M, int d, const RngKey& key,
                        const BuildOpts& opts) {
    check_build_args(n, M, d);
    if (opts.batch > 0 && opts.record_traces)
        throw ConfigError("batched construction does not record traces");
    LevelBuilder builder(n, d, key, opts, M);
    builder.report().protocol = "levels";
    builder.extend_to(M);
    return builder.take_report();
}

BuildReport build_A_n_M_clocks(std::int64_t n, std::int64_t M, int d, const RngKey& key,
                               const BuildOpts& opts) {
    check_build_args(n, M, d);

    struct Launch {
        double clock;
        std::uint32_t src_idx;
        std::uint32_t particle;
        Site src;
    };
    std::vector<Launch> launches;
    launches.reserve(static_cast<std::size_t>(n) *
                     static_cast<std::size_t>(ipow(2 * M + 1, d - 1)));

    std::uint32_t src_idx = 0;
    for (std::int64_t level = 0; level <= M; ++level) {
        for_each_source_at_level(level, d, [&](const Site& src) {
            for (std::int64_t i = 0; i < n; ++i) {
                RngStream cs(key, Purpose::Clock, src_idx, static_cast<std::uint32_t>(i));
                launches.push_back(Launch{cs.next_unit(), src_idx, static_cast<std::uint32_t>(i), src});
            }
            ++src_idx;
        });
    }
    std::sort(launches.begin(), launches.end(), [](const Launch& a, const Launch& b) {
        if (a.clock != b.clock) return a.clock < b.clock;
        if (a.src_idx != b.src_idx) return a.src_idx < b.src_idx;
        return a.particle < b.particle;
    });

    BuildReport report{make_aggregate(n, M, d, opts)};
    report.protocol = "clocks";
    WalkOpts wopts;
    wopts.record_path = opts.record_traces && opts.record_paths;
    wopts.strip_bound = opts.strip_bound;
    wopts.max_steps = opts.max_steps;
    for (const Launch& l : launches) {
        RngStream stream(key, Purpose::Walk, l.src_idx, l.particle);
        ParticleTrace tr = run_until_exit(report.aggregate, l.src, std::move(stream), wopts);
        if (!report.aggregate.insert(tr.exit_site))
            throw std::logic_error("particle settled on an occupied site");
        ++report.particles_launched;
        if (opts.record_traces) report.traces.push_back(std::move(tr));
    }
    return report;
}

BuildReport build_waves(std::int64_t n, std::int64_t M, std::int64_t alpha, std::int64_t J,
                        int d, const RngKey& key, const BuildOpts& opts) {
    check_build_args(n, M, d);
    if (alpha < 2) throw ConfigError("waves require alpha >= 2");
    if (J < -1) throw ConfigError("J must be >= -1");
    const std::int64_t Ma = ipow(M, alpha);
    const std::int64_t top = (J + 2) * Ma;

    BuildOpts bopts = opts;
    if (bopts.strip_bound < 0) bopts.strip_bound = M;
    LevelBuilder builder(n, d, key, bopts, std::max(Ma, top));
    builder.report().protocol = "waves";
    builder.fire_levels(0, Ma, nullptr, nullptr);

    for (std::int64_t j = 0; j <= J; ++j) {
        WaveStat stat;
        stat.j = j;
        const std::int64_t lo = (j + 1) * Ma + 1;
        const std::int64_t hi = (j + 2) * Ma;
        for (std::int64_t lv = lo; lv <= hi; ++lv) stat.sources += sources_at_level_count(lv, d);
        builder.fire_levels(lo, hi, &stat.strip_visits, &stat.particles);
        builder.report().per_wave.push_back(stat);
    }
    return builder.take_report();
}

BuildReport build_truncated_infinite(std::int64_t n, std::int64_t W, std::int64_t alpha,
                                     std::int64_t margin, int d, const RngKey& key,
                                     const BuildOpts& opts) {
    if (W < 1) throw ConfigError("window must be >= 1");
    if (alpha < 1) throw ConfigError("alpha must be >= 1");
    const std::int64_t L = ipow(W, alpha) + margin;
    if (L < W) throw ConfigError("truncation level below the trusted window");
    check_build_args(n, L, d);

    BuildOpts bopts = opts;
    if (bopts.strip_bound < 0) bopts.strip_bound = W;
    LevelBuilder builder(n, d, key, bopts, L);
    builder.report().protocol = "truncated-infinite";
    const std::int64_t half = L / 2;
    builder.fire_levels(0, half, nullptr, nullptr);

    TruncationTelemetry& tel = builder.report().telemetry;
    tel.level = L;
    tel.window = W;
    builder.fire_levels(half + 1, L, &tel.boundary_visits, &tel.boundary_particles);
    return builder.take_report();
}

} // namespace idla
