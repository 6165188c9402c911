#pragma once

#include <cstdint>
#include <vector>

namespace idla {

// z for a two-sided 99% interval.
inline constexpr double kZ99 = 2.5758293035489004;
// z for a two-sided test at level 0.001 (0.01 Bonferroni-corrected over 10).
inline constexpr double kZBonferroni10 = 3.2905267314919255;

struct Interval {
    double low = 0;
    double high = 1;
};

// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z);

// Two-proportion z statistic with pooled variance; 0 when both pools are
// degenerate (p-hat in {0,1} on both sides with equal values).
double two_proportion_z(std::int64_t hits1, std::int64_t n1, std::int64_t hits2, std::int64_t n2);

struct MeanSE {
    double mean = 0;
    double se = 0;
    std::size_t n = 0;
};

MeanSE mean_se(const std::vector<double>& xs);

} // namespace idla
