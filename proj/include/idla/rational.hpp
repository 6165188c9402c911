#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "idla/errors.hpp"

namespace idla {

// Small exact rational on int64. Cone angles and donut radii are compared
// with integer cross multiplication; doubles would misclassify boundary
// sites.
struct Rat {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Rat() = default;
    Rat(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw ConfigError("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    // floor(num/den), exact for negative values too
    std::int64_t floor() const {
        std::int64_t q = num / den;
        if (num % den != 0 && num < 0) --q;
        return q;
    }
    std::int64_t ceil() const {
        std::int64_t q = num / den;
        if (num % den != 0 && num > 0) ++q;
        return q;
    }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rat& a, const Rat& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }

    // a <= num/den * x  with exact integer arithmetic (x, a integers)
    bool times_at_least(std::int64_t x, std::int64_t a) const {
        return static_cast<__int128>(a) * den <= static_cast<__int128>(num) * x;
    }
};

// Parses "p/q", "p" or a plain decimal such as "0.1".
Rat parse_rational(const std::string& text);

} // namespace idla
