#include "idla/occupancy.hpp"

#include <algorithm>

#include "idla/aggregate.hpp"

namespace idla {

OccupancyStore OccupancyStore::boxed(int dim, const Site& lo, const Site& hi,
                                     std::size_t expected) {
    OccupancyStore s(dim, expected);
    // 2^31 bits (256 MB) is the ceiling for the dense path; larger boxes
    // silently stay on the hash backend.
    constexpr std::int64_t kMaxBits = std::int64_t{1} << 31;
    std::int64_t volume = 1;
    for (int i = 0; i < dim; ++i) {
        const std::int64_t e = static_cast<std::int64_t>(hi[i]) - lo[i] + 1;
        if (e <= 0 || volume > kMaxBits / e) return s;
        volume *= e;
        s.lo_[static_cast<std::size_t>(i)] = lo[i];
        s.ext_[static_cast<std::size_t>(i)] = e;
    }
    // axis 0 innermost, the rest outward in order
    std::int64_t stride = 1;
    s.stride_[0] = 1;
    stride = s.ext_[0];
    for (int i = dim - 1; i >= 1; --i) {
        s.stride_[static_cast<std::size_t>(i)] = stride;
        stride *= s.ext_[static_cast<std::size_t>(i)];
    }
    s.bits_.assign(static_cast<std::size_t>((volume + 63) / 64), 0);
    s.dense_ = true;
    return s;
}

std::vector<Site> Aggregate::sorted_sites() const {
    std::vector<Site> out;
    out.reserve(static_cast<std::size_t>(count_));
    for_each_site([&](const Site& z) { out.push_back(z); });
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace idla
