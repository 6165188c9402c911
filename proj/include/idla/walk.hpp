#pragma once

#include <cstdint>
#include <vector>

#include "idla/aggregate.hpp"
#include "idla/rng.hpp"
#include "idla/site.hpp"
#include "idla/trace.hpp"

namespace idla {

struct WalkOpts {
    bool record_path = false;
    std::int64_t strip_bound = -1;   // >= 0: track visits to the strip Z_bound
    std::int64_t continue_slab = -1; // >= 0: keep walking after settling until |z_1| reaches this
    std::uint64_t max_steps = 100'000'000ull;
};

// One move of the simple symmetric walk: each of the 2d unit neighbors with
// probability 1/(2d). Draw r maps to axis r/2, direction +1 for even r.
inline Site step(const Site& z, RngStream& stream) {
    const std::uint32_t r = stream.next_face(static_cast<std::uint32_t>(2 * z.dim));
    Site w = z;
    const int axis = static_cast<int>(r >> 1);
    w[axis] += (r & 1u) ? -1 : 1;
    return w;
}

// Walks from start until the first site outside the aggregate. A start that
// is already outside returns immediately with zero steps.
ParticleTrace run_until_exit(const Aggregate& agg, const Site& start, RngStream stream,
                             const WalkOpts& opts = {});

namespace detail {
// In-place variant used by the batched construction: advances z (and its
// packed key) until it leaves agg, accumulating steps and strip visits.
void advance_until_exit(const Aggregate& agg, Site& z, std::uint64_t& key, RngStream& stream,
                        std::int64_t strip_bound, bool& visited_strip, std::uint64_t max_steps,
                        std::uint64_t& steps);
} // namespace detail

} // namespace idla
