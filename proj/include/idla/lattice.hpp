#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "idla/rational.hpp"
#include "idla/site.hpp"

namespace idla {

// Axis-aligned regions of Z^d, all with respect to the sup norm:
//   slab(x)            |z_1| <= floor(x)
//   strip(x)           max_{i>=2} |z_i| <= floor(x)
//   ball(c, r)         ||z - c|| <= floor(r)            (closed)
//   annulus(M, j, a)   z in H and (j+1)M^a < ||z|| <= (j+2)M^a
//   halfline_border(x) |z_1| = floor(x)                 (the two slab faces)
// Real parameters are floored once, here, at construction.
class RegionSpec {
public:
    enum class Kind { Slab, Strip, Ball, Annulus, HalflineBorder };

    static RegionSpec slab(double x);
    static RegionSpec strip(double x);
    static RegionSpec ball(const Site& center, double r);
    static RegionSpec annulus(std::int64_t M, std::int64_t j, std::int64_t alpha);
    static RegionSpec halfline_border(double x);

    Kind kind() const { return kind_; }
    std::int64_t bound() const { return a_; }        // floored main parameter
    std::int64_t inner() const { return inner_; }    // annulus only
    std::int64_t outer() const { return outer_; }    // annulus only
    const Site& center() const { return center_; }

    bool contains(const Site& z) const;

private:
    RegionSpec() = default;
    Kind kind_ = Kind::Slab;
    std::int64_t a_ = 0;
    std::int64_t inner_ = 0;
    std::int64_t outer_ = 0;
    Site center_;
    bool has_center_ = false;
};

// The cone of sites with |z_1| <= eps * ||p_H(z)||. Membership is decided
// with integer cross multiplication; no floating point. Any positive angle
// is a valid cone; donut stacks additionally need eps < 1/2.
struct ConeSpec {
    Rat epsilon;

    explicit ConeSpec(Rat eps) : epsilon(eps) {
        if (!(Rat(0) < eps)) throw InvalidAngle("cone angle must be positive");
    }

    bool contains(const Site& z) const {
        const std::int64_t x = std::abs(static_cast<std::int64_t>(z[0]));
        return epsilon.times_at_least(hyper_norm(z), x);
    }
};

// All sources of H at sup distance exactly M from the origin, sorted
// lexicographically on (z_2, ..., z_d).
std::vector<Site> sources_at_level(std::int64_t M, int d);

// Streaming variant; visits sources in the same order without materializing.
void for_each_source_at_level(std::int64_t M, int d, const std::function<void(const Site&)>& fn);

// (2M+1)^(d-1) - (2M-1)^(d-1) for M >= 1, 1 for M = 0.
std::int64_t sources_at_level_count(std::int64_t M, int d);

std::int64_t ipow(std::int64_t base, std::int64_t exp);

} // namespace idla
