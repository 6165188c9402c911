#pragma once

#include <cstdint>
#include <vector>

#include "idla/site.hpp"

namespace idla {

// One particle: the walk from its source until the first site outside the
// aggregate it was launched into, plus whatever the caller asked to record.
struct ParticleTrace {
    Site start;
    Site exit_site;
    std::uint64_t steps = 0;

    // Recorded positions, start first. Ends at exit_site unless the walk was
    // asked to continue to a slab border, in which case settle_index marks
    // where the particle settled and the tail is the free continuation.
    std::vector<Site> path;
    std::int64_t settle_index = -1;

    bool strip_tracked = false;
    bool visited_strip = false; // any trajectory site (start..settlement) in Z_bound
};

} // namespace idla
