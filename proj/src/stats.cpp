#include "idla/stats.hpp"

#include <cmath>

#include "idla/errors.hpp"

namespace idla {

std::int64_t line_occupancy(const Aggregate& A, const Site& line) {
    return A.line_count(line);
}

std::optional<std::int64_t> x_extreme(const Aggregate& A, const Site& z) {
    return A.line_extreme(z);
}

OverReport over_event(const Aggregate& A, std::int64_t M, const Rat& eps) {
    OverReport report;
    report.epsilon = eps;
    report.M = M;
    A.for_each_line([&](const Site& line, const LineStat& stat) {
        if (stat.count == 0) return;
        const std::int64_t level = hyper_norm(line);
        if (level < M) return;
        const std::int64_t x = stat.max_abs_x;
        if (!eps.times_at_least(level, x)) // X_z > eps * level, exactly
            report.witnesses.push_back(OverWitness{line, level, x});
    });
    report.violated = !report.witnesses.empty();
    return report;
}

void for_each_window_line(int d, std::int64_t W, const std::function<void(const Site&)>& fn) {
    Site line = Site::zero(d);
    for (int i = 1; i < d; ++i) line[i] = static_cast<Coord>(-W);
    while (true) {
        fn(line);
        int i = d - 1;
        while (i >= 1) {
            if (line[i] < W) {
                ++line[i];
                break;
            }
            line[i] = static_cast<Coord>(-W);
            --i;
        }
        if (i == 0) break;
    }
}

FluctuationReport fluctuation(const Aggregate& A, std::int64_t n, std::int64_t W) {
    if (n < 0 || W < 0) throw ConfigError("fluctuation needs n, W >= 0");
    FluctuationReport rep;
    rep.n = n;
    rep.W = W;
    const std::int64_t half = n / 2;

    std::int64_t outer = 0;
    A.for_each_line([&](const Site& line, const LineStat& stat) {
        if (stat.count == 0 || hyper_norm(line) > W) return;
        if (stat.max_abs_x > outer) outer = stat.max_abs_x;
    });
    rep.delta_outer = outer > half ? outer - half : 0;

    std::int64_t inner = 0;
    Site probe = Site::zero(A.dim());
    for_each_window_line(A.dim(), W, [&](const Site& line) {
        if (inner >= half) return;
        probe = line;
        for (std::int64_t x = 0; x < half - inner; ++x) {
            probe[0] = static_cast<Coord>(x);
            bool missing = !A.contains(probe);
            if (!missing && x > 0) {
                probe[0] = static_cast<Coord>(-x);
                missing = !A.contains(probe);
            }
            if (missing) {
                inner = half - x;
                break;
            }
        }
    });
    rep.delta_inner = inner;

    const double logn = n > 1 ? std::log(static_cast<double>(n)) : 0.0;
    const double norm = logn > 0 ? std::sqrt(logn) : 0.0;
    rep.norm_inner = norm > 0 ? static_cast<double>(rep.delta_inner) / norm : 0.0;
    rep.norm_outer = norm > 0 ? static_cast<double>(rep.delta_outer) / norm : 0.0;
    return rep;
}

std::vector<TileCounts> tile_counters(const std::vector<ParticleTrace>& traces, double r,
                                      const std::vector<RegionSpec>& tiles) {
    const std::int64_t rb = static_cast<std::int64_t>(std::floor(r));
    std::vector<TileCounts> out(tiles.size());
    for (const ParticleTrace& tr : traces) {
        if (tr.path.empty()) throw MissingPath("tile counters need recorded paths");
        std::size_t stop = tr.path.size();
        for (std::size_t i = 0; i < tr.path.size(); ++i) {
            if (std::abs(static_cast<std::int64_t>(tr.path[i][0])) >= rb) {
                stop = i;
                break;
            }
        }
        if (stop == tr.path.size())
            throw MissingPath("trajectory never reaches the slab border; record with continuation");
        const Site& arrival = tr.path[stop];
        if (std::abs(static_cast<std::int64_t>(arrival[0])) != rb)
            continue; // jumped past the border only if it started outside; no tile hit
        const bool before_settle =
            tr.settle_index < 0 || static_cast<std::int64_t>(stop) <= tr.settle_index;
        for (std::size_t t = 0; t < tiles.size(); ++t) {
            if (!tiles[t].contains(arrival)) continue;
            ++out[t].m_count;
            if (before_settle) ++out[t].w_count;
        }
    }
    return out;
}

TentacleScan tentacle_scan(const Aggregate& A, const Site& z, double r, double b) {
    if (r <= 0) throw ConfigError("tentacle scan needs r > 0");
    const std::int64_t rb = static_cast<std::int64_t>(std::floor(r));
    const int d = A.dim();

    double ball_volume = 1;
    for (int i = 0; i < d; ++i) ball_volume *= static_cast<double>(2 * rb + 1);

    TentacleScan scan;
    if (ball_volume <= static_cast<double>(A.size())) {
        // enumerate the ball
        Site probe = z;
        std::function<void(int)> rec = [&](int axis) {
            if (axis == d) {
                if (A.contains(probe)) ++scan.count;
                return;
            }
            for (std::int64_t v = -rb; v <= rb; ++v) {
                probe[axis] = static_cast<Coord>(z[axis] + v);
                rec(axis + 1);
            }
        };
        rec(0);
    } else {
        const RegionSpec ball = RegionSpec::ball(z, r);
        A.for_each_site([&](const Site& w) {
            if (ball.contains(w)) ++scan.count;
        });
    }
    scan.flagged = static_cast<double>(scan.count) <= b * std::pow(r, d);
    return scan;
}

std::vector<WaveFraction> stabilization_rate(const BuildReport& report, std::int64_t M) {
    (void)M;
    if (report.protocol != "waves")
        throw MissingWaveData("stabilization rate needs a waves build");
    std::vector<WaveFraction> out;
    out.reserve(report.per_wave.size());
    for (const WaveStat& w : report.per_wave) {
        WaveFraction f;
        f.j = w.j;
        f.sources = w.sources;
        f.particles = w.particles;
        f.strip_visits = w.strip_visits;
        f.visit_fraction =
            w.particles > 0 ? static_cast<double>(w.strip_visits) / static_cast<double>(w.particles) : 0.0;
        f.event = w.strip_visits > 0;
        out.push_back(f);
    }
    return out;
}

} // namespace idla
