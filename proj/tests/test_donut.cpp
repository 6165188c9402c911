#include <doctest.h>

#include <cmath>

#include "idla/donut.hpp"
#include "idla/walk.hpp"

using namespace idla;

TEST_CASE("donut family geometry: quarter-angle example") {
    // e = 1/4, l = 64, M = 4: radii 64, 32, 16, 8, 4; widths 32, 16, 8, 4;
    // partial sums 32, 48, 56, 60 <= 60, so k = 3.
    const DonutFamily fam(Rat(64), Rat(4), Rat(1, 4));
    CHECK(fam.k() == 3);
    CHECK(fam.donut_count() == 4);
    const auto radii = fam.radii();
    REQUIRE(radii.size() == 5);
    const double expect[] = {64, 32, 16, 8, 4};
    for (std::size_t i = 0; i < 5; ++i) CHECK(radii[i] == doctest::Approx(expect[i]));

    // K(1/4) ln(64/4) = (1 / (2 ln 2)) * ln 16 = 2
    CHECK(fam.k_lower_bound() == doctest::Approx(2.0));
    CHECK(static_cast<double>(fam.k()) >= fam.k_lower_bound());

    // maximality: adding the next width (2 e l_4 = 2) would overflow 60
    double sum = 0;
    for (double r : {64.0, 32.0, 16.0, 8.0}) sum += 0.5 * r;
    CHECK(sum <= 60.0);
    CHECK(sum + 0.5 * 4.0 > 60.0);
}

TEST_CASE("donut family guards") {
    CHECK_THROWS_AS(DonutFamily(Rat(64), Rat(64), Rat(1, 4)), EmptyFamily);
    CHECK_THROWS_AS(DonutFamily(Rat(64), Rat(63), Rat(1, 4)), EmptyFamily);
    CHECK_THROWS_AS(DonutFamily(Rat(64), Rat(4), Rat(1, 2)), InvalidAngle);
    CHECK_THROWS_AS(DonutFamily(Rat(64), Rat(4), Rat(0)), InvalidAngle);
}

TEST_CASE("integer thresholds come from exact rational floors") {
    const DonutFamily fam(Rat(200), Rat(20), Rat(1, 10));
    const Donut& d0 = fam.donut(0);
    CHECK(d0.slab == 20);
    CHECK(d0.outer == 200);
    CHECK(d0.inner == 160);
    CHECK(d0.mid == 180);
    CHECK(d0.ext_lo == 20);
    const Donut& d1 = fam.donut(1);
    CHECK(d1.slab == 16);
    CHECK(d1.outer == 160);
    CHECK(d1.inner == 128);
    CHECK(fam.k() == 9);
}

TEST_CASE("crossing bound values") {
    CHECK(crossing_bound(0, 3) == doctest::Approx(1.0));
    CHECK(crossing_bound(2, 3) == doctest::Approx(0.9452160494).epsilon(1e-9));
    CHECK(crossing_bound(10, 2) == doctest::Approx(0.5244604750).epsilon(1e-9));
}

TEST_CASE("a straight inward ray crosses every countable donut") {
    const DonutFamily fam(Rat(64), Rat(4), Rat(1, 4));
    const ConeSpec cone(Rat(1, 4));
    ParticleTrace tr;
    for (Coord y = 64; y >= 4; --y) tr.path.push_back(Site{0, y, 0});
    CHECK(classify_crossings(tr, fam, cone) == fam.crossable_count());
}

TEST_CASE("leaving the cone freezes the count") {
    const DonutFamily fam(Rat(64), Rat(4), Rat(1, 4));
    const ConeSpec cone(Rat(1, 4));
    ParticleTrace tr;
    // march straight out of the cone before any inner ring is reached
    for (Coord x = 0; x <= 20; ++x) tr.path.push_back(Site{x, 60, 0});
    CHECK(classify_crossings(tr, fam, cone) == 0);

    ParticleTrace empty;
    CHECK_THROWS_AS(classify_crossings(empty, fam, cone), MissingPath);
}

TEST_CASE("crossings are monotone under path truncation") {
    const DonutFamily fam(Rat(32), Rat(2), Rat(1, 5));
    const ConeSpec cone(Rat(1, 5));
    const RngKey key{77, 0};
    for (std::uint32_t trial = 0; trial < 50; ++trial) {
        RngStream s(key, Purpose::Experiment, trial, 7);
        ParticleTrace tr;
        Site z{0, 32, 0};
        tr.path.push_back(z);
        for (int t = 0; t < 400; ++t) {
            z = step(z, s);
            tr.path.push_back(z);
        }
        std::int64_t prev = 0;
        for (std::size_t cut = 1; cut <= tr.path.size(); cut += 37) {
            ParticleTrace prefix;
            prefix.path.assign(tr.path.begin(), tr.path.begin() + static_cast<std::ptrdiff_t>(cut));
            const std::int64_t c = classify_crossings(prefix, fam, cone);
            CHECK(c >= prev);
            prev = c;
        }
        CHECK(classify_crossings(tr, fam, cone) >= prev);
    }
}

TEST_CASE("crossing experiment report shape") {
    const DonutFamily fam(Rat(40), Rat(5), Rat(1, 5));
    const ConeSpec cone(Rat(1, 5));

    const CrossingReport empty = mc_crossing_experiment(fam, cone, sources_at_level(40, 3), 0,
                                                        RngKey{1, 0});
    CHECK(empty.rows.empty());

    const CrossingReport rep =
        mc_crossing_experiment(fam, cone, sources_at_level(40, 3), 2000, RngKey{1, 0});
    REQUIRE(static_cast<std::int64_t>(rep.rows.size()) == fam.crossable_count() + 1);
    CHECK(rep.rows[0].i == 0);
    CHECK(rep.rows[0].empirical_p == doctest::Approx(1.0));
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        CHECK(rep.rows[i].empirical_p <= rep.rows[i - 1].empirical_p); // nested events
        CHECK(rep.rows[i].ci_low <= rep.rows[i].empirical_p);
        CHECK(rep.rows[i].empirical_p <= rep.rows[i].ci_high);
        CHECK(rep.rows[i].bound == doctest::Approx(crossing_bound(rep.rows[i].i, 3)));
    }
}

TEST_CASE("middling-slice walks leave through the exterior border often enough") {
    const DonutFamily fam(Rat(80), Rat(8), Rat(1, 8));
    const Donut& d0 = fam.donut(0);
    const Site y{0, static_cast<Coord>(d0.mid), 0};
    REQUIRE(fam.on_middling_slice(0, y));
    const std::int64_t reps = 4000;
    const double freq = mc_exterior_exit_frequency(fam, 0, y, reps, RngKey{13, 0});
    const double sigma = std::sqrt((1.0 / 6) * (5.0 / 6) / static_cast<double>(reps));
    CHECK(freq >= 1.0 / 6 - 3 * sigma);
}
