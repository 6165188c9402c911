#include "idla/stat_util.hpp"

#include <cmath>

namespace idla {

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
    if (trials <= 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p + z2 / (2 * n);
    const double margin = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    Interval ci;
    ci.low = (center - margin) / denom;
    ci.high = (center + margin) / denom;
    if (ci.low < 0) ci.low = 0;
    if (ci.high > 1) ci.high = 1;
    return ci;
}

double two_proportion_z(std::int64_t hits1, std::int64_t n1, std::int64_t hits2, std::int64_t n2) {
    if (n1 <= 0 || n2 <= 0) return 0.0;
    const double p1 = static_cast<double>(hits1) / static_cast<double>(n1);
    const double p2 = static_cast<double>(hits2) / static_cast<double>(n2);
    const double pooled = static_cast<double>(hits1 + hits2) / static_cast<double>(n1 + n2);
    const double var = pooled * (1 - pooled) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2));
    if (var == 0.0) return 0.0;
    return (p1 - p2) / std::sqrt(var);
}

MeanSE mean_se(const std::vector<double>& xs) {
    MeanSE r;
    r.n = xs.size();
    if (xs.empty()) return r;
    double s = 0;
    for (double x : xs) s += x;
    r.mean = s / static_cast<double>(xs.size());
    if (xs.size() < 2) return r;
    double v = 0;
    for (double x : xs) v += (x - r.mean) * (x - r.mean);
    v /= static_cast<double>(xs.size() - 1);
    r.se = std::sqrt(v / static_cast<double>(xs.size()));
    return r;
}

} // namespace idla
