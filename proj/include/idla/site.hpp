#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <string>

#include "idla/errors.hpp"

namespace idla {

using Coord = std::int32_t;

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 8;

// A point of Z^d. Coordinate 0 is the direction orthogonal to the source
// hyperplane H = {0} x Z^(d-1); coordinates 1..d-1 span H.
struct Site {
    std::array<Coord, kMaxDim> c{};
    std::int8_t dim = 0;

    Site() = default;
    Site(std::initializer_list<Coord> xs) {
        if (static_cast<int>(xs.size()) < kMinDim || static_cast<int>(xs.size()) > kMaxDim)
            throw DimensionMismatch("site dimension out of range");
        dim = static_cast<std::int8_t>(xs.size());
        int i = 0;
        for (Coord x : xs) c[static_cast<std::size_t>(i++)] = x;
    }
    static Site zero(int d) {
        if (d < kMinDim || d > kMaxDim) throw DimensionMismatch("dimension out of range");
        Site s;
        s.dim = static_cast<std::int8_t>(d);
        return s;
    }

    Coord operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    Coord& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    friend bool operator==(const Site& a, const Site& b) {
        if (a.dim != b.dim) return false;
        for (int i = 0; i < a.dim; ++i)
            if (a.c[static_cast<std::size_t>(i)] != b.c[static_cast<std::size_t>(i)]) return false;
        return true;
    }
    friend bool operator!=(const Site& a, const Site& b) { return !(a == b); }

    // Lexicographic on (z_1, ..., z_d); used for canonical file ordering.
    friend bool operator<(const Site& a, const Site& b) {
        for (int i = 0; i < a.dim; ++i) {
            const auto ai = a.c[static_cast<std::size_t>(i)], bi = b.c[static_cast<std::size_t>(i)];
            if (ai != bi) return ai < bi;
        }
        return false;
    }

    Site translated(const Site& k) const {
        Site r = *this;
        for (int i = 0; i < dim; ++i) r.c[static_cast<std::size_t>(i)] += k.c[static_cast<std::size_t>(i)];
        return r;
    }

    std::string to_string() const;
};

std::int64_t sup_norm(const Site& z);

// max_{i>=2} |z_i|; distance of the line through z from the source plane's
// origin line. For d=2 this is |z_2|.
std::int64_t hyper_norm(const Site& z);

Site proj_H(const Site& z);

// Bijective packing of a site into a 64-bit key. Every coordinate gets
// 64/d bits (offset-encoded); walks never get near the representable range
// at sane step budgets, and pack() throws if one somehow does.
class SitePacker {
public:
    explicit SitePacker(int dim) : dim_(dim) {
        if (dim < 1 || dim > kMaxDim) throw DimensionMismatch("packer dimension out of range");
        bits_ = 64 / dim;
        if (bits_ > 32) bits_ = 32;
        half_ = std::int64_t{1} << (bits_ - 1);
        mask_ = (std::uint64_t{1} << bits_) - 1;
    }

    int dim() const { return dim_; }
    int bits_per_coord() const { return bits_; }
    std::int64_t coord_limit() const { return half_ - 1; }

    std::uint64_t pack(const Site& z) const {
        std::uint64_t key = 0;
        for (int i = 0; i < dim_; ++i) {
            const std::int64_t u = static_cast<std::int64_t>(z.c[static_cast<std::size_t>(i)]) + half_;
            if (u < 0 || u > 2 * half_ - 1)
                throw CoordinateOverflow("site coordinate exceeds packable range (|x| <= " +
                                         std::to_string(coord_limit()) + " for d=" + std::to_string(dim_) + ")");
            key |= static_cast<std::uint64_t>(u) << (bits_ * i);
        }
        return key;
    }

    // Pack of the line key (z_2,...,z_d) of a d-dim site, using a (d-1)-dim
    // packer built by the caller.
    std::uint64_t pack_tail(const Site& z) const {
        std::uint64_t key = 0;
        for (int i = 0; i < dim_; ++i) {
            const std::int64_t u = static_cast<std::int64_t>(z.c[static_cast<std::size_t>(i + 1)]) + half_;
            if (u < 0 || u > 2 * half_ - 1)
                throw CoordinateOverflow("line coordinate exceeds packable range");
            key |= static_cast<std::uint64_t>(u) << (bits_ * i);
        }
        return key;
    }

    Site unpack(std::uint64_t key) const {
        Site z;
        z.dim = static_cast<std::int8_t>(dim_);
        for (int i = 0; i < dim_; ++i) {
            const std::uint64_t u = (key >> (bits_ * i)) & mask_;
            z.c[static_cast<std::size_t>(i)] = static_cast<Coord>(static_cast<std::int64_t>(u) - half_);
        }
        return z;
    }

    // Key delta for a +/-1 move along axis; lets walks update keys in O(1).
    std::uint64_t axis_delta(int axis) const { return std::uint64_t{1} << (bits_ * axis); }

private:
    int dim_;
    int bits_;
    std::int64_t half_;
    std::uint64_t mask_;
};

} // namespace idla
