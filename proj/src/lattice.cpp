#include "idla/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace idla {

std::string Site::to_string() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < dim; ++i) {
        if (i) os << ',';
        os << c[static_cast<std::size_t>(i)];
    }
    os << ')';
    return os.str();
}

std::int64_t sup_norm(const Site& z) {
    std::int64_t m = 0;
    for (int i = 0; i < z.dim; ++i) {
        const std::int64_t a = std::abs(static_cast<std::int64_t>(z[i]));
        if (a > m) m = a;
    }
    return m;
}

std::int64_t hyper_norm(const Site& z) {
    std::int64_t m = 0;
    for (int i = 1; i < z.dim; ++i) {
        const std::int64_t a = std::abs(static_cast<std::int64_t>(z[i]));
        if (a > m) m = a;
    }
    return m;
}

Site proj_H(const Site& z) {
    Site r = z;
    r[0] = 0;
    return r;
}

Rat parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::int64_t p = std::stoll(text.substr(0, slash));
        const std::int64_t q = std::stoll(text.substr(slash + 1));
        return Rat(p, q);
    }
    const auto dot = text.find('.');
    if (dot != std::string::npos) {
        const std::string frac = text.substr(dot + 1);
        if (frac.size() > 15) throw ConfigError("too many decimal digits in rational: " + text);
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        const bool neg = !text.empty() && text[0] == '-';
        const std::int64_t whole = std::stoll(text.substr(0, dot).empty() ||
                                              text.substr(0, dot) == "-" ? "0" : text.substr(0, dot));
        const std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
        std::int64_t num = std::abs(whole) * den + f;
        if (neg || whole < 0) num = -num;
        return Rat(num, den);
    }
    return Rat(std::stoll(text), 1);
}

RegionSpec RegionSpec::slab(double x) {
    if (x < 0) throw ConfigError("slab parameter must be non-negative");
    RegionSpec r;
    r.kind_ = Kind::Slab;
    r.a_ = static_cast<std::int64_t>(std::floor(x));
    return r;
}

RegionSpec RegionSpec::strip(double x) {
    if (x < 0) throw ConfigError("strip parameter must be non-negative");
    RegionSpec r;
    r.kind_ = Kind::Strip;
    r.a_ = static_cast<std::int64_t>(std::floor(x));
    return r;
}

RegionSpec RegionSpec::ball(const Site& center, double rad) {
    if (rad < 0) throw ConfigError("ball radius must be non-negative");
    RegionSpec r;
    r.kind_ = Kind::Ball;
    r.center_ = center;
    r.has_center_ = true;
    r.a_ = static_cast<std::int64_t>(std::floor(rad));
    return r;
}

RegionSpec RegionSpec::annulus(std::int64_t M, std::int64_t j, std::int64_t alpha) {
    if (M < 1 || j < 0 || alpha < 1) throw ConfigError("annulus requires M >= 1, j >= 0, alpha >= 1");
    RegionSpec r;
    r.kind_ = Kind::Annulus;
    const std::int64_t Ma = ipow(M, alpha);
    r.inner_ = (j + 1) * Ma;
    r.outer_ = (j + 2) * Ma;
    return r;
}

RegionSpec RegionSpec::halfline_border(double x) {
    if (x < 0) throw ConfigError("border parameter must be non-negative");
    RegionSpec r;
    r.kind_ = Kind::HalflineBorder;
    r.a_ = static_cast<std::int64_t>(std::floor(x));
    return r;
}

bool RegionSpec::contains(const Site& z) const {
    switch (kind_) {
        case Kind::Slab:
            return std::abs(static_cast<std::int64_t>(z[0])) <= a_;
        case Kind::Strip:
            return hyper_norm(z) <= a_;
        case Kind::Ball: {
            if (center_.dim != z.dim) throw DimensionMismatch("ball center dimension mismatch");
            std::int64_t m = 0;
            for (int i = 0; i < z.dim; ++i) {
                const std::int64_t a = std::abs(static_cast<std::int64_t>(z[i]) -
                                                static_cast<std::int64_t>(center_[i]));
                if (a > m) m = a;
            }
            return m <= a_;
        }
        case Kind::Annulus: {
            if (z[0] != 0) return false;
            const std::int64_t n = sup_norm(z);
            return inner_ < n && n <= outer_;
        }
        case Kind::HalflineBorder:
            return std::abs(static_cast<std::int64_t>(z[0])) == a_;
    }
    return false;
}

std::int64_t ipow(std::int64_t base, std::int64_t exp) {
    std::int64_t r = 1;
    for (std::int64_t i = 0; i < exp; ++i) {
        r *= base;
        if (r < 0) throw ConfigError("integer power overflow");
    }
    return r;
}

namespace {

// Enumerates y in [-M, M]^(d-1) with max|y_i| = M in lexicographic order.
void enumerate_surface(std::int64_t M, int d, int coord, bool max_hit, Site& buf,
                       const std::function<void(const Site&)>& fn) {
    if (coord == d) {
        if (max_hit || M == 0) fn(buf);
        return;
    }
    for (std::int64_t v = -M; v <= M; ++v) {
        // prune: if this is the last coordinate and the max is still unmet,
        // only +-M can complete a surface point
        if (coord == d - 1 && !max_hit && std::abs(v) != M) continue;
        buf[coord] = static_cast<Coord>(v);
        enumerate_surface(M, d, coord + 1, max_hit || std::abs(v) == M, buf, fn);
    }
}

} // namespace

void for_each_source_at_level(std::int64_t M, int d,
                              const std::function<void(const Site&)>& fn) {
    if (d < kMinDim || d > kMaxDim) throw DimensionMismatch("dimension out of range");
    if (M < 0) throw ConfigError("level must be non-negative");
    Site buf = Site::zero(d);
    if (M == 0) {
        fn(buf);
        return;
    }
    enumerate_surface(M, d, 1, false, buf, fn);
}

std::vector<Site> sources_at_level(std::int64_t M, int d) {
    std::vector<Site> out;
    out.reserve(static_cast<std::size_t>(M == 0 ? 1 : sources_at_level_count(M, d)));
    for_each_source_at_level(M, d, [&](const Site& s) { out.push_back(s); });
    return out;
}

std::int64_t sources_at_level_count(std::int64_t M, int d) {
    if (M == 0) return 1;
    return ipow(2 * M + 1, d - 1) - ipow(2 * M - 1, d - 1);
}

} // namespace idla
