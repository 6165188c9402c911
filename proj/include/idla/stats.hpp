#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "idla/aggregate.hpp"
#include "idla/lattice.hpp"
#include "idla/rational.hpp"
#include "idla/walk.hpp"

namespace idla {

// Sites settled on the line through z (z_1 ignored).
std::int64_t line_occupancy(const Aggregate& A, const Site& line);

// Furthest |z'_1| over the line of z; nullopt for an empty line (0 would
// falsely pass cone checks).
std::optional<std::int64_t> x_extreme(const Aggregate& A, const Site& z);

struct OverWitness {
    Site line;            // z_1 = 0 representative of the line
    std::int64_t level;   // ||line||
    std::int64_t extreme; // X_z on that line
};

// The event that some line at level l >= M carries a site outside the cone
// of angle eps, i.e. X_z > eps * l. Exact rational comparison.
struct OverReport {
    Rat epsilon;
    std::int64_t M = 0;
    bool violated = false;
    std::vector<OverWitness> witnesses;
};

OverReport over_event(const Aggregate& A, std::int64_t M, const Rat& eps);

// Deviation of the aggregate from the ideal slab of half-thickness n/2,
// measured inside the strip of half-width W:
//   delta_inner: deepest missing site, max over missing z of n/2 - |z_1|
//   delta_outer: overshoot of the furthest occupied site, X(n) - n/2
// both clamped at 0 and normalized by sqrt(log n).
struct FluctuationReport {
    std::int64_t n = 0;
    std::int64_t W = 0;
    std::int64_t delta_inner = 0;
    std::int64_t delta_outer = 0;
    double norm_inner = 0;
    double norm_outer = 0;
};

FluctuationReport fluctuation(const Aggregate& A, std::int64_t n, std::int64_t W);

// Counters over recorded trajectories against the slab R_r. A tile is read
// as its intersection with the slab border |z_1| = floor(r); a trajectory
// scores when its first arrival on the border lands in the tile:
//   m_count: the full walk arrives in the tile
//   w_count: same, and the particle had not settled before arriving
struct TileCounts {
    std::int64_t w_count = 0;
    std::int64_t m_count = 0;
};

std::vector<TileCounts> tile_counters(const std::vector<ParticleTrace>& traces, double r,
                                      const std::vector<RegionSpec>& tiles);

// Sites of A in the closed ball B(z, r) against the b * r^d thin-tentacle
// budget; flagged means the neighborhood is suspiciously empty.
struct TentacleScan {
    std::int64_t count = 0;
    bool flagged = false;
};

TentacleScan tentacle_scan(const Aggregate& A, const Site& z, double r, double b);

struct WaveFraction {
    std::int64_t j = 0;
    std::int64_t sources = 0;
    std::int64_t particles = 0;
    std::int64_t strip_visits = 0;
    double visit_fraction = 0; // per-particle visit rate within the wave
    bool event = false;        // at least one wave particle visited the strip
};

// Per-wave visit statistics of a waves build (strip of half-width M).
std::vector<WaveFraction> stabilization_rate(const BuildReport& report, std::int64_t M);

// Sweeps y over [-W, W]^(d-1); fn receives the line as a site with z_1 = 0.
void for_each_window_line(int d, std::int64_t W, const std::function<void(const Site&)>& fn);

} // namespace idla
