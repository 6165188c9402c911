#include "idla/donut.hpp"

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

#include "idla/errors.hpp"

namespace idla {

namespace {

using BR = boost::multiprecision::cpp_rational;
using BI = boost::multiprecision::cpp_int;

BR to_big(const Rat& r) { return BR(r.num, r.den); }

std::int64_t floor_big(const BR& x) {
    BI q = numerator(x) / denominator(x);
    if (numerator(x) < 0 && numerator(x) % denominator(x) != 0) --q;
    return static_cast<std::int64_t>(q);
}

std::int64_t ceil_big(const BR& x) {
    BI q = numerator(x) / denominator(x);
    if (numerator(x) > 0 && numerator(x) % denominator(x) != 0) ++q;
    return static_cast<std::int64_t>(q);
}

} // namespace

DonutFamily::DonutFamily(const Rat& l, const Rat& M, const Rat& epsilon) : eps_(epsilon) {
    if (!(Rat(0) < epsilon) || !(epsilon < Rat(1, 2)))
        throw InvalidAngle("donut angle must lie in (0, 1/2)");
    if (!(Rat(0) < l)) throw ConfigError("outer radius must be positive");
    if (M < Rat(0)) throw ConfigError("floor level must be non-negative");

    const BR e = to_big(epsilon);
    const BR lb = to_big(l);
    const BR Mb = to_big(M);
    const BR ratio = 1 - 2 * e;
    const BR budget = lb - Mb;

    l0_ = l.to_double();
    floor_level_ = M.to_double();

    // greatest k with sum_{i=0..k} 2 e l_i <= l - M, by exact summation
    std::vector<BR> radii;
    BR li = lb;
    BR sum = 0;
    while (true) {
        const BR width = 2 * e * li;
        if (sum + width > budget) break;
        sum += width;
        radii.push_back(li);
        li *= ratio;
        if (radii.size() > 200'000) throw ConfigError("donut family too deep");
    }
    if (radii.empty()) throw EmptyFamily("no donut fits between the outer radius and the floor level");
    k_ = static_cast<std::int64_t>(radii.size()) - 1;
    radii.push_back(li); // l_{k+1}, inner radius of D^k

    donuts_.reserve(radii.size() - 1);
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
        Donut D;
        D.slab = floor_big(e * radii[i]);
        D.outer = floor_big(radii[i]);
        D.inner = floor_big(radii[i + 1]);
        D.mid = floor_big((1 - e) * radii[i]);
        D.ext_lo = ceil_big(e * radii[i]);
        D.radius = static_cast<double>(radii[i]);
        donuts_.push_back(D);
    }
}

double DonutFamily::k_lower_bound() const {
    if (floor_level_ <= 0) return 0.0;
    const double e = eps_.to_double();
    return -std::log(l0_ / floor_level_) / (2.0 * std::log1p(-2.0 * e));
}

std::vector<double> DonutFamily::radii() const {
    std::vector<double> out;
    out.reserve(donuts_.size() + 1);
    for (const Donut& D : donuts_) out.push_back(D.radius);
    out.push_back(donuts_.back().radius * (1.0 - 2.0 * eps_.to_double()));
    return out;
}

bool CrossingTracker::feed(const Site& z) {
    if (!cone_->contains(z)) return false;
    if (target_ >= fam_->crossable_count()) return false;

    const std::int64_t x = z[0] < 0 ? -static_cast<std::int64_t>(z[0]) : z[0];
    std::int64_t proj = hyper_norm(z);

    while (in_attempt_) {
        const Donut& D = fam_->donut(target_);
        if (x <= D.slab && proj <= D.inner) {
            // reached the inner ring without having left the donut
            ++target_;
            if (target_ >= fam_->crossable_count()) return false;
            in_attempt_ = fam_->in_donut(target_, z);
            continue;
        }
        if (x > D.slab || proj > D.outer) in_attempt_ = false; // left D^t, attempt resets
        break;
    }
    if (!in_attempt_ && fam_->in_donut(target_, z)) in_attempt_ = true;
    return true;
}

std::int64_t classify_crossings(const ParticleTrace& trace, const DonutFamily& fam,
                                const ConeSpec& cone) {
    if (trace.path.empty()) throw MissingPath("crossing classification needs a recorded path");
    CrossingTracker tracker(fam, cone);
    for (const Site& z : trace.path)
        if (!tracker.feed(z)) break;
    return tracker.crossings();
}

double crossing_bound(std::int64_t i, int d) {
    if (i < 0) throw ConfigError("crossing index must be non-negative");
    if (d < kMinDim) throw DimensionMismatch("dimension out of range");
    const double c = 1.0 / (4.0 * static_cast<double>(d) * static_cast<double>(d));
    return std::pow(1.0 - c, static_cast<double>(i));
}

CrossingReport mc_crossing_experiment(const DonutFamily& fam, const ConeSpec& cone,
                                      const std::vector<Site>& starts, std::int64_t reps,
                                      const RngKey& key, std::uint64_t max_steps) {
    CrossingReport report;
    report.k = fam.k();
    report.donut_count = fam.donut_count();
    report.reps = reps;
    if (reps <= 0) return report;
    if (starts.empty()) throw ConfigError("crossing experiment needs start sites");

    const int d = starts.front().dim;
    const std::int64_t escape = 4 * static_cast<std::int64_t>(fam.outer_radius()) + 4;
    std::vector<std::int64_t> at_least(static_cast<std::size_t>(fam.crossable_count()) + 1, 0);

    for (std::int64_t rep = 0; rep < reps; ++rep) {
        const Site& start = starts[static_cast<std::size_t>(rep % static_cast<std::int64_t>(starts.size()))];
        RngStream stream(key, Purpose::Experiment, static_cast<std::uint32_t>(rep), 0);
        CrossingTracker tracker(fam, cone);
        Site z = start;
        bool alive = tracker.feed(z);
        std::uint64_t steps = 0;
        while (alive) {
            if (steps++ >= max_steps)
                throw StepBudgetExceeded("crossing experiment walk exceeded max_steps");
            z = step(z, stream);
            if (hyper_norm(z) > escape) break; // drifted away; later crossings are negligible
            alive = tracker.feed(z);
        }
        const std::int64_t c = tracker.crossings();
        for (std::int64_t i = 0; i <= c; ++i) ++at_least[static_cast<std::size_t>(i)];
    }

    for (std::int64_t i = 0; i <= fam.crossable_count(); ++i) {
        CrossingRow row;
        row.i = i;
        row.hits = at_least[static_cast<std::size_t>(i)];
        row.empirical_p = static_cast<double>(row.hits) / static_cast<double>(reps);
        const Interval ci = wilson_interval(row.hits, reps, kZ99);
        row.ci_low = ci.low;
        row.ci_high = ci.high;
        row.bound = crossing_bound(i, d);
        report.rows.push_back(row);
    }
    return report;
}

double mc_exterior_exit_frequency(const DonutFamily& fam, std::int64_t i, const Site& y,
                                  std::int64_t reps, const RngKey& key) {
    const Donut& D = fam.donut(i);
    std::int64_t hits = 0;
    for (std::int64_t rep = 0; rep < reps; ++rep) {
        RngStream stream(key, Purpose::Experiment, static_cast<std::uint32_t>(rep), 1);
        Site z = y;
        while (true) {
            z = step(z, stream);
            std::int64_t m = 0;
            for (int a = 0; a < z.dim; ++a) {
                const std::int64_t v = std::abs(static_cast<std::int64_t>(z[a]) -
                                                static_cast<std::int64_t>(y[a]));
                if (v > m) m = v;
            }
            if (m > D.slab) break;
        }
        if (fam.in_exterior_border(i, z)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(reps);
}

} // namespace idla
