#include <doctest.h>

#include <set>

#include "idla/lattice.hpp"

using namespace idla;

TEST_CASE("sup norm") {
    CHECK(sup_norm(Site{0, 0, 0}) == 0);
    CHECK(sup_norm(Site{3, -5, 2}) == 5);
    CHECK(sup_norm(Site{-7, 7, 7}) == 7);
}

TEST_CASE("projection onto the source plane") {
    CHECK(proj_H(Site{7, 1, -2}) == Site{0, 1, -2});
    CHECK(proj_H(Site{0, 4, 4}) == Site{0, 4, 4});
    CHECK(proj_H(Site{-3, 0, 0}) == Site{0, 0, 0});
    // idempotent, and never increases the norm
    for (Coord a = -3; a <= 3; ++a)
        for (Coord b = -3; b <= 3; ++b) {
            const Site z{a, b, static_cast<Coord>(a + b)};
            CHECK(proj_H(proj_H(z)) == proj_H(z));
            CHECK(sup_norm(proj_H(z)) <= sup_norm(z));
        }
}

TEST_CASE("region membership") {
    const auto slab = RegionSpec::slab(2.9);
    CHECK(slab.contains(Site{2, 100, -100}));
    CHECK(!slab.contains(Site{3, 0, 0}));

    const auto strip = RegionSpec::strip(3);
    CHECK(!strip.contains(Site{50, 4, 0}));
    CHECK(strip.contains(Site{50, 3, -3}));

    const auto ann = RegionSpec::annulus(2, 0, 2);
    CHECK(ann.contains(Site{0, 5, 0}));
    CHECK(!ann.contains(Site{0, 4, 0}));  // on the inner ball
    CHECK(ann.contains(Site{0, 8, 0}));   // closed outer boundary
    CHECK(!ann.contains(Site{0, 9, 0}));
    CHECK(!ann.contains(Site{1, 5, 0}));  // not a source

    const auto ball = RegionSpec::ball(Site{1, 1, 1}, 2.5);
    CHECK(ball.contains(Site{3, 0, 0}));
    CHECK(!ball.contains(Site{4, 1, 1}));

    const auto border = RegionSpec::halfline_border(4.0);
    CHECK(border.contains(Site{4, 9, 9}));
    CHECK(border.contains(Site{-4, 0, 0}));
    CHECK(!border.contains(Site{3, 0, 0}));
}

TEST_CASE("annuli partition the far sources") {
    // every source beyond M^alpha lies in exactly one annulus
    const std::int64_t M = 2, alpha = 2;
    for (Coord y = -20; y <= 20; ++y)
        for (Coord w = -20; w <= 20; ++w) {
            const Site z{0, y, w};
            if (sup_norm(z) <= M * M) continue;
            int hits = 0;
            for (std::int64_t j = 0; j <= 5; ++j)
                if (RegionSpec::annulus(M, j, alpha).contains(z)) ++hits;
            CHECK(hits == 1);
        }
}

TEST_CASE("cone membership is exact and monotone in the angle") {
    const ConeSpec half(Rat(1, 2));
    CHECK(half.contains(Site{1, 4, 3}));
    const ConeSpec tenth(Rat(1, 10));
    CHECK(!tenth.contains(Site{2, 10, 0}));
    CHECK(tenth.contains(Site{1, 10, 0}));
    CHECK(tenth.contains(Site{0, 123, -9}));
    CHECK(half.contains(Site{0, 0, 0}));

    CHECK_THROWS_AS(ConeSpec(Rat(0, 5)), InvalidAngle);
    CHECK_THROWS_AS(ConeSpec(Rat(-1, 5)), InvalidAngle);

    for (Coord x = -6; x <= 6; ++x)
        for (Coord y = -8; y <= 8; ++y) {
            const Site z{x, y, 3};
            if (ConeSpec(Rat(1, 5)).contains(z)) CHECK(ConeSpec(Rat(2, 5)).contains(z));
        }
}

TEST_CASE("sources at a level: order, counts, cumulative union") {
    CHECK(sources_at_level(0, 3) == std::vector<Site>{Site{0, 0, 0}});
    CHECK(sources_at_level(1, 3).size() == 8);
    CHECK(sources_at_level(2, 4).size() == 98); // 125 - 27, by enumeration

    for (int d = 2; d <= 4; ++d) {
        std::set<Site> all;
        for (std::int64_t M = 0; M <= 3; ++M) {
            const auto level = sources_at_level(M, d);
            CHECK(static_cast<std::int64_t>(level.size()) == sources_at_level_count(M, d));
            std::set<Site> unique(level.begin(), level.end());
            CHECK(unique.size() == level.size());
            for (const Site& z : level) {
                CHECK(z[0] == 0);
                CHECK(sup_norm(z) == M);
                all.insert(z);
            }
            // lexicographic order on (z_2, ..., z_d)
            for (std::size_t i = 1; i < level.size(); ++i) CHECK(level[i - 1] < level[i]);
            CHECK(static_cast<std::int64_t>(all.size()) == ipow(2 * M + 1, d - 1));
        }
    }
}

TEST_CASE("dimension mismatch is rejected") {
    const auto ball = RegionSpec::ball(Site{0, 0}, 1);
    CHECK_THROWS_AS(ball.contains(Site{0, 0, 0}), DimensionMismatch);
}
