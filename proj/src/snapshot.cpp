#include "idla/snapshot.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "idla/errors.hpp"

namespace idla {

void atomic_write_text(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

void save_snapshot(const std::string& path, const Aggregate& A, const SnapshotHeader& header) {
    std::string body;
    body.reserve(static_cast<std::size_t>(A.size()) * (12 * static_cast<std::size_t>(A.dim())) + 256);

    {
        nlohmann::json h;
        h["dimension"] = header.dimension;
        h["n"] = header.n;
        h["M"] = header.M;
        h["seed"] = header.seed;
        h["protocol"] = header.protocol;
        body += h.dump();
        body += '\n';
    }

    char buf[32];
    for (const Site& z : A.sorted_sites()) {
        body += "{\"z\":[";
        for (int i = 0; i < z.dim; ++i) {
            if (i) body += ',';
            std::snprintf(buf, sizeof(buf), "%d", z[i]);
            body += buf;
        }
        body += "]}\n";
    }
    atomic_write_text(path, body);
}

std::pair<Aggregate, SnapshotHeader> load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty snapshot " + path);
    const nlohmann::json h = nlohmann::json::parse(line);

    SnapshotHeader header;
    header.dimension = h.at("dimension").get<int>();
    header.n = h.at("n").get<std::int64_t>();
    header.M = h.at("M").get<std::int64_t>();
    header.seed = h.at("seed").get<std::uint64_t>();
    header.protocol = h.at("protocol").get<std::string>();

    Aggregate A(header.dimension);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const nlohmann::json row = nlohmann::json::parse(line);
        const auto& coords = row.at("z");
        if (static_cast<int>(coords.size()) != header.dimension)
            throw DimensionMismatch("snapshot row dimension mismatch in " + path);
        Site z = Site::zero(header.dimension);
        for (int i = 0; i < header.dimension; ++i) z[i] = coords[static_cast<std::size_t>(i)].get<Coord>();
        A.insert(z);
    }
    return {std::move(A), header};
}

} // namespace idla
