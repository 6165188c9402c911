#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idla/occupancy.hpp"
#include "idla/rng.hpp"
#include "idla/site.hpp"
#include "idla/trace.hpp"

namespace idla {

// The growing set of settled sites. Tracks exact cardinality and, per line
// (z_2..z_d), the furthest occupied |z_1| together with the line count; both
// are maintained incrementally on every settlement so extreme queries never
// rescan.
class Aggregate {
public:
    explicit Aggregate(int dim, std::size_t expected = 0, std::size_t expected_lines = 0)
        : dim_(dim),
          store_(OccupancyStore::hashed(dim, std::min<std::size_t>(expected, 1u << 22))),
          line_packer_(dim - 1),
          lines_(expected_lines ? expected_lines : expected / 8) {}

    Aggregate(int dim, const Site& lo, const Site& hi, std::size_t expected = 0,
              std::size_t expected_lines = 0)
        : dim_(dim),
          store_(OccupancyStore::boxed(dim, lo, hi, expected / 64 + 16)),
          line_packer_(dim - 1),
          lines_(expected_lines ? expected_lines : expected / 8) {}

    int dim() const { return dim_; }
    std::uint64_t size() const { return count_; }

    bool contains(const Site& z) const { return store_.contains(z, store_.packer().pack(z)); }
    bool contains(const Site& z, std::uint64_t packed) const { return store_.contains(z, packed); }

    // true if z was newly added
    bool insert(const Site& z) {
        if (!store_.insert(z, store_.packer().pack(z))) return false;
        ++count_;
        LineStat& stat = lines_.find_or_insert(line_packer_.pack_tail(z));
        const Coord ax = z[0] < 0 ? static_cast<Coord>(-z[0]) : z[0];
        if (stat.count == 0 || ax > stat.max_abs_x) stat.max_abs_x = ax;
        ++stat.count;
        return true;
    }

    // Furthest |z_1| on the line of z, or nullopt for an unoccupied line.
    std::optional<std::int64_t> line_extreme(const Site& z) const {
        const LineStat* s = lines_.find(line_packer_.pack_tail(z));
        if (!s || s->count == 0) return std::nullopt;
        return static_cast<std::int64_t>(s->max_abs_x);
    }

    std::int64_t line_count(const Site& z) const {
        const LineStat* s = lines_.find(line_packer_.pack_tail(z));
        return s ? s->count : 0;
    }

    template <class F>
    void for_each_site(F&& fn) const {
        store_.for_each_site(fn);
    }

    // Visits each occupied line as a full-dimension site with z_1 = 0.
    template <class F>
    void for_each_line(F&& fn) const {
        lines_.for_each([&](std::uint64_t key, const LineStat& stat) {
            const Site tail = line_packer_.unpack(key);
            Site line = Site::zero(dim_);
            for (int i = 1; i < dim_; ++i) line[i] = tail[i - 1];
            fn(line, stat);
        });
    }

    std::vector<Site> sorted_sites() const;

    const SitePacker& packer() const { return store_.packer(); }
    const OccupancyStore& store() const { return store_; }

private:
    int dim_;
    OccupancyStore store_;
    SitePacker line_packer_;
    LineMap lines_;
    std::uint64_t count_ = 0;
};

struct WaveStat {
    std::int64_t j = 0;
    std::int64_t sources = 0;
    std::int64_t particles = 0;
    std::int64_t strip_visits = 0; // particles whose trajectory visited the tracked strip
};

struct TruncationTelemetry {
    std::int64_t level = 0;  // sources fired up to this level
    std::int64_t window = 0; // trusted strip half-width
    std::int64_t boundary_particles = 0;
    std::int64_t boundary_visits = 0; // visits to the window from levels in (level/2, level]
};

struct BuildOpts {
    bool record_traces = false;
    bool record_paths = false;
    std::int64_t strip_bound = -1; // >= 0: flag trajectory visits to Z_bound
    std::uint64_t max_steps = 100'000'000ull;
    bool dense_storage = true;   // allow the bitmap backend when extent is known
    int batch = 0;               // > 0: unordered-parallel batching (law-preserving, order-free)
};

struct BuildReport {
    Aggregate aggregate;
    std::int64_t particles_launched = 0;
    std::vector<ParticleTrace> traces;
    std::vector<WaveStat> per_wave;
    TruncationTelemetry telemetry;
    std::string protocol; // "levels", "clocks", "waves", "truncated-infinite"
};

// Diaconis-Fulton smash sum A (+) {z}: adds z directly when unoccupied,
// otherwise adds the exit site of a walk from z.
Aggregate smash_sum(const Aggregate& A, const Site& z, RngStream stream,
                    std::uint64_t max_steps = 100'000'000ull);

// Canonical construction: levels 0..M in order, sources of a level in
// lexicographic order, the n particles of a source back to back.
BuildReport build_A_n_M(std::int64_t n, std::int64_t M, int d, const RngKey& key,
                        const BuildOpts& opts = {});

// Same particle set, global order given by i.i.d. uniform clocks.
BuildReport build_A_n_M_clocks(std::int64_t n, std::int64_t M, int d, const RngKey& key,
                               const BuildOpts& opts = {});

// Ball of sources up to level M^alpha first, then waves j = 0..J from the
// annuli ((j+1)M^alpha, (j+2)M^alpha]. Wave particles are tracked for visits
// to the strip of half-width M.
BuildReport build_waves(std::int64_t n, std::int64_t M, std::int64_t alpha, std::int64_t J,
                        int d, const RngKey& key, const BuildOpts& opts = {});

// Surrogate for the limiting aggregate: fires all sources up to
// L = W^alpha + margin and flags the strip of half-width W as the trusted
// observation region, with truncation-bias telemetry.
BuildReport build_truncated_infinite(std::int64_t n, std::int64_t W, std::int64_t alpha,
                                     std::int64_t margin, int d, const RngKey& key,
                                     const BuildOpts& opts = {});

// Incremental level-by-level construction; build_A_n_M(n, M) equals
// extending the same builder to M, so monotonicity is structural.
class LevelBuilder {
public:
    LevelBuilder(std::int64_t n, int d, const RngKey& key, const BuildOpts& opts = {},
                 std::int64_t expected_top_level = -1);

    void extend_to(std::int64_t M);
    std::int64_t top_level() const { return next_level_ - 1; }

    const Aggregate& aggregate() const { return report_.aggregate; }
    BuildReport take_report() { return std::move(report_); }
    BuildReport& report() { return report_; }

private:
    friend BuildReport build_waves(std::int64_t, std::int64_t, std::int64_t, std::int64_t, int,
                                   const RngKey&, const BuildOpts&);
    friend BuildReport build_truncated_infinite(std::int64_t, std::int64_t, std::int64_t,
                                                std::int64_t, int, const RngKey&, const BuildOpts&);

    void fire_levels(std::int64_t from, std::int64_t to, std::int64_t* strip_visits,
                     std::int64_t* particles_tracked);

    std::int64_t n_;
    int d_;
    RngKey key_;
    BuildOpts opts_;
    std::int64_t next_level_ = 0;
    std::uint32_t next_source_ = 0;
    BuildReport report_;
};

} // namespace idla
