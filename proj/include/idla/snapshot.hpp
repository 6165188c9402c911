#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "idla/aggregate.hpp"

namespace idla {

// Header record of an aggregate snapshot file. The file is NDJSON: this
// record first, then one {"z":[...]} line per site in lexicographic order,
// so identical aggregates serialize to identical bytes.
struct SnapshotHeader {
    int dimension = 3;
    std::int64_t n = 0;
    std::int64_t M = 0;
    std::uint64_t seed = 0;
    std::string protocol = "levels";
};

void save_snapshot(const std::string& path, const Aggregate& A, const SnapshotHeader& header);

std::pair<Aggregate, SnapshotHeader> load_snapshot(const std::string& path);

// Writes to path + ".tmp" then renames; readers never observe partial files.
void atomic_write_text(const std::string& path, const std::string& content);

} // namespace idla
