#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "idla/config.hpp"
#include "idla/render.hpp"
#include "idla/snapshot.hpp"

using namespace idla;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("snapshot round trip is exact and canonical") {
    const BuildReport r = build_A_n_M(2, 1, 3, RngKey{7, 0});
    SnapshotHeader header;
    header.dimension = 3;
    header.n = 2;
    header.M = 1;
    header.seed = 7;
    header.protocol = r.protocol;

    const auto dir = std::filesystem::temp_directory_path() / "idla_snapshot_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "a.ndjson").string();
    save_snapshot(path, r.aggregate, header);

    auto [loaded, h2] = load_snapshot(path);
    CHECK(h2.dimension == 3);
    CHECK(h2.n == 2);
    CHECK(h2.M == 1);
    CHECK(h2.seed == 7);
    CHECK(h2.protocol == "levels");
    CHECK(loaded.size() == r.aggregate.size());
    r.aggregate.for_each_site([&](const Site& z) { CHECK(loaded.contains(z)); });

    // resaving the loaded aggregate reproduces the bytes
    const std::string path2 = (dir / "b.ndjson").string();
    save_snapshot(path2, loaded, h2);
    CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("renders: classes and sizes") {
    Aggregate A(3);
    // synthetic slab |x| <= 2 over a 5x5 window, n = 4
    for (Coord x = -2; x <= 2; ++x)
        for (Coord y = -2; y <= 2; ++y)
            for (Coord z = -2; z <= 2; ++z) A.insert(Site{x, y, z});

    const std::string surface = render_ppm(A, 4, 2, "surface");
    std::istringstream in(surface);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    CHECK(magic == "P3");
    CHECK(w == 5);
    CHECK(h == 5);
    CHECK(maxval == 255);
    // every line's extreme is exactly n/2: all blue
    int r, g, b;
    while (in >> r >> g >> b) {
        CHECK(r == 0);
        CHECK(g == 0);
        CHECK(b == 255);
    }

    const std::string slice = render_ppm(A, 4, 2, "slice");
    {
        std::istringstream sin(slice);
        std::string m2;
        int sw, sh, mv;
        sin >> m2 >> sw >> sh >> mv;
        int red = 0, green = 0, blue = 0, white = 0, other = 0;
        int cr, cg, cb;
        while (sin >> cr >> cg >> cb) {
            if (cr == 255 && cg == 0)
                ++red;
            else if (cg == 200)
                ++green;
            else if (cb == 255 && cr == 0)
                ++blue;
            else if (cr == 255 && cg == 255)
                ++white;
            else
                ++other;
        }
        CHECK(red == 0);      // no red in a clean slab
        CHECK(green > 0);     // green interior
        CHECK(blue > 0);      // blue shell
        CHECK(white > 0);     // white outside
        CHECK(other == 0);
    }

    Aggregate empty(3);
    const std::string blank = render_ppm(empty, 4, 2, "surface");
    std::istringstream bin(blank);
    bin >> magic >> w >> h >> maxval;
    while (bin >> r >> g >> b) {
        CHECK(r == 255);
        CHECK(g == 255);
        CHECK(b == 255);
    }

    Aggregate flat(2);
    CHECK_THROWS_AS(render_ppm(flat, 4, 2, "surface"), UnsupportedDimension);
    CHECK_THROWS_AS(render_ppm(A, 4, 2, "sideways"), ConfigError);
}

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    cfg.seed_set = true;
    cfg.protocol = "levels";
    CHECK_NOTHROW(cfg.validate("simulate"));

    ExperimentConfig no_seed = cfg;
    no_seed.seed_set = false;
    CHECK_THROWS_AS(no_seed.validate("simulate"), ConfigError);
    // render needs no seed, but does need a snapshot
    CHECK_THROWS_AS(no_seed.validate("render"), ConfigError);
    no_seed.snapshot = "some.ndjson";
    CHECK_NOTHROW(no_seed.validate("render"));

    ExperimentConfig bad_dim = cfg;
    bad_dim.dim = 1;
    CHECK_THROWS_AS(bad_dim.validate("simulate"), ConfigError);

    ExperimentConfig bad_proto = cfg;
    bad_proto.protocol = "spiral";
    CHECK_THROWS_AS(bad_proto.validate("simulate"), ConfigError);

    ExperimentConfig donuts = cfg;
    donuts.epsilon = Rat(1, 10);
    donuts.l0 = Rat(100);
    donuts.level = 10;
    CHECK_NOTHROW(donuts.validate("donuts"));
    donuts.epsilon = Rat(2, 3);
    CHECK_THROWS_AS(donuts.validate("donuts"), ConfigError);

    ExperimentConfig trunc = cfg;
    trunc.protocol = "truncated-infinite";
    trunc.window = -1;
    CHECK_THROWS_AS(trunc.validate("simulate"), ConfigError);
    trunc.window = 3;
    CHECK_NOTHROW(trunc.validate("simulate"));
}
