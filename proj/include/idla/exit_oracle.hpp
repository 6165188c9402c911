#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "idla/aggregate.hpp"
#include "idla/rng.hpp"
#include "idla/site.hpp"

namespace idla {

using BigRat = boost::multiprecision::cpp_rational;

// Law of the first site outside a finite set reached by a walk started
// inside it (harmonic measure from the start point). Support is the outer
// boundary {w not in A : some z in A has ||w - z||_1 = 1}.
struct ExitDistribution {
    std::vector<std::pair<Site, double>> probs; // sorted by site

    double total() const;
    double prob_of(const Site& w) const;
};

double total_variation(const ExitDistribution& a, const ExitDistribution& b);

// Exact law by evolving the absorbed walk until the surviving mass is below
// 1e-13. Dense grids go through the masked-sweep kernel; sets whose bounding
// box exceeds dense_cell_cap fall back to a sparse sweep.
ExitDistribution exact_exit_distribution(const std::vector<Site>& A, const Site& start,
                                         std::size_t size_cap = 50'000,
                                         std::int64_t dense_cell_cap = 8'000'000);

// Exact rational law by Gaussian elimination on the visit-count system;
// probabilities sum to exactly 1. Capped at 500 sites.
std::vector<std::pair<Site, BigRat>> exact_exit_distribution_rational(const std::vector<Site>& A,
                                                                      const Site& start);

// Monte Carlo exit law over `samples` independent walks.
ExitDistribution sample_exit_distribution(const Aggregate& A, const Site& start,
                                          std::size_t samples, const RngKey& key,
                                          std::uint32_t stream_source = 0);

Aggregate aggregate_from_sites(int dim, const std::vector<Site>& sites);

} // namespace idla
