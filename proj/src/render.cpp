#include "idla/render.hpp"

#include <sstream>

#include "idla/errors.hpp"
#include "idla/lattice.hpp"
#include "idla/snapshot.hpp"

namespace idla {

namespace {

struct Color {
    int r, g, b;
};

constexpr Color kWhite{255, 255, 255};
constexpr Color kBlue{0, 0, 255};
constexpr Color kGreen{0, 200, 0};
constexpr Color kRed{255, 0, 0};

Color classify(std::int64_t abs_x, std::int64_t half) {
    if (abs_x == half) return kBlue;
    if (abs_x < half) return kGreen;
    return kRed;
}

} // namespace

std::string render_ppm(const Aggregate& A, std::int64_t n, std::int64_t window,
                       const std::string& style) {
    if (A.dim() != 3) throw UnsupportedDimension("rendering needs a 3-dimensional snapshot");
    if (window < 0) throw ConfigError("render window must be non-negative");
    const std::int64_t half = n / 2;

    std::ostringstream img;
    if (style == "surface") {
        const std::int64_t side = 2 * window + 1;
        img << "P3\n" << side << ' ' << side << "\n255\n";
        Site line = Site::zero(3);
        for (std::int64_t y = -window; y <= window; ++y) {
            for (std::int64_t z = -window; z <= window; ++z) {
                line[1] = static_cast<Coord>(y);
                line[2] = static_cast<Coord>(z);
                const auto extreme = A.line_extreme(line);
                const Color c = extreme ? classify(*extreme, half) : kWhite;
                img << c.r << ' ' << c.g << ' ' << c.b << (z == window ? '\n' : ' ');
            }
        }
    } else if (style == "slice") {
        const std::int64_t xspan = std::max<std::int64_t>(half + half / 2 + 4, 8);
        const std::int64_t rows = 2 * xspan + 1;
        const std::int64_t cols = 2 * window + 1;
        img << "P3\n" << cols << ' ' << rows << "\n255\n";
        Site site = Site::zero(3);
        for (std::int64_t x = xspan; x >= -xspan; --x) {
            for (std::int64_t y = -window; y <= window; ++y) {
                site[0] = static_cast<Coord>(x);
                site[1] = static_cast<Coord>(y);
                site[2] = 0;
                const Color c = A.contains(site) ? classify(x < 0 ? -x : x, half) : kWhite;
                img << c.r << ' ' << c.g << ' ' << c.b << (y == window ? '\n' : ' ');
            }
        }
    } else {
        throw ConfigError("unknown render style: " + style + " (use surface or slice)");
    }
    return img.str();
}

void render_ppm_file(const std::string& out_path, const Aggregate& A, std::int64_t n,
                     std::int64_t window, const std::string& style) {
    atomic_write_text(out_path, render_ppm(A, n, window, style));
}

} // namespace idla
