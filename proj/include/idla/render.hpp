#pragma once

#include <cstdint>
#include <string>

#include "idla/aggregate.hpp"

namespace idla {

// Plain PPM (P3) pictures of a d=3 aggregate, colored against the ideal slab
// half-thickness n/2: blue at |x| = n/2, green below, red above, white for
// unoccupied points.
//   surface: one pixel per line (y, z) in the window, colored by the line's
//            extreme |x|
//   slice:   the z = 0 plane, one pixel per (x, y), colored per site
// Throws UnsupportedDimension unless the aggregate is 3-dimensional.
std::string render_ppm(const Aggregate& A, std::int64_t n, std::int64_t window,
                       const std::string& style);

void render_ppm_file(const std::string& out_path, const Aggregate& A, std::int64_t n,
                     std::int64_t window, const std::string& style);

} // namespace idla
