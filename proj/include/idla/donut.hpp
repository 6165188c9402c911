#pragma once

#include <cstdint>
#include <vector>

#include "idla/lattice.hpp"
#include "idla/rational.hpp"
#include "idla/rng.hpp"
#include "idla/site.hpp"
#include "idla/stat_util.hpp"
#include "idla/walk.hpp"

namespace idla {

// Integer thresholds of one donut, all derived from the exact rational radii
// once at construction. D^i is the annular box
//   [-slab, slab] x (shell inner < ||p_H(z)|| <= outer),
// its middling slice sits at projection radius mid, and its exterior border
// is |z_1| >= ext_lo over the same shell.
struct Donut {
    std::int64_t slab = 0;
    std::int64_t outer = 0;
    std::int64_t inner = 0;
    std::int64_t mid = 0;
    std::int64_t ext_lo = 0;
    double radius = 0; // l_i
};

// Geometric stack of donuts wrapping the cone between an outer radius l and
// a floor level M: radii l_i = (1-2e)^i l, each donut's length 2 e l_i equal
// to its width l_i - l_{i+1}. k is the greatest index with
// sum_{i=0..k} 2 e l_i <= l - M (computed exactly); the stack then holds the
// k+1 donuts D^0..D^k, of which the first k are the crossable ones.
class DonutFamily {
public:
    DonutFamily(const Rat& l, const Rat& M, const Rat& epsilon);

    const Rat& epsilon() const { return eps_; }
    double outer_radius() const { return l0_; }
    double floor_level() const { return floor_level_; }

    std::int64_t k() const { return k_; }
    std::int64_t donut_count() const { return k_ + 1; }
    std::int64_t crossable_count() const { return k_; }

    // K(e) * ln(l / M) with K(e) = -1 / (2 ln(1 - 2e)); for small angles k
    // is guaranteed to reach at least this.
    double k_lower_bound() const;

    const std::vector<Donut>& donuts() const { return donuts_; }
    const Donut& donut(std::int64_t i) const { return donuts_[static_cast<std::size_t>(i)]; }
    std::vector<double> radii() const;

    bool in_donut(std::int64_t i, const Site& z) const {
        const Donut& D = donut(i);
        const std::int64_t x = z[0] < 0 ? -static_cast<std::int64_t>(z[0]) : z[0];
        const std::int64_t p = hyper_norm(z);
        return x <= D.slab && D.inner < p && p <= D.outer;
    }

    bool in_exterior_border(std::int64_t i, const Site& z) const {
        const Donut& D = donut(i);
        const std::int64_t x = z[0] < 0 ? -static_cast<std::int64_t>(z[0]) : z[0];
        const std::int64_t p = hyper_norm(z);
        return x >= D.ext_lo && D.inner < p && p <= D.outer;
    }

    bool on_middling_slice(std::int64_t i, const Site& z) const {
        const Donut& D = donut(i);
        const std::int64_t x = z[0] < 0 ? -static_cast<std::int64_t>(z[0]) : z[0];
        return x <= D.slab && hyper_norm(z) == D.mid;
    }

private:
    Rat eps_;
    double l0_ = 0;
    double floor_level_ = 0;
    std::int64_t k_ = -1;
    std::vector<Donut> donuts_;
};

// Streaming crossing classifier: feed positions in order; the count is the
// number of donuts D^0, D^1, ... crossed outer-ring-to-inner-ring, each
// without leaving the donut in between, before the first exit from the cone.
class CrossingTracker {
public:
    CrossingTracker(const DonutFamily& fam, const ConeSpec& cone) : fam_(&fam), cone_(&cone) {}

    // false once the classification is final (cone exit or everything crossed)
    bool feed(const Site& z);
    std::int64_t crossings() const { return target_; }

private:
    const DonutFamily* fam_;
    const ConeSpec* cone_;
    std::int64_t target_ = 0;
    bool in_attempt_ = false;
};

// Number of donuts crossed by a recorded path (requires a path).
std::int64_t classify_crossings(const ParticleTrace& trace, const DonutFamily& fam,
                                const ConeSpec& cone);

// (1 - 1/(4 d^2))^i: upper bound for the probability of i crossings.
double crossing_bound(std::int64_t i, int d);

struct CrossingRow {
    std::int64_t i = 0;
    std::int64_t hits = 0;
    double empirical_p = 0;
    double ci_low = 0;
    double ci_high = 1;
    double bound = 1;
};

struct CrossingReport {
    std::int64_t k = 0;
    std::int64_t donut_count = 0;
    std::int64_t reps = 0;
    std::vector<CrossingRow> rows; // i = 0..k
};

// Free walks from the given start sites (cycled over reps); per i, the
// empirical frequency of {crossings >= i} with a Wilson 99% interval and the
// theoretical bound. Walks are abandoned once they leave the cone, cross
// everything, or drift past four outer radii.
CrossingReport mc_crossing_experiment(const DonutFamily& fam, const ConeSpec& cone,
                                      const std::vector<Site>& starts, std::int64_t reps,
                                      const RngKey& key, std::uint64_t max_steps = 100'000'000ull);

// Fraction of walks from y that leave the sup ball B(y, slab_i) through the
// exterior border of donut i.
double mc_exterior_exit_frequency(const DonutFamily& fam, std::int64_t i, const Site& y,
                                  std::int64_t reps, const RngKey& key);

} // namespace idla
