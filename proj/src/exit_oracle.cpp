#include "idla/exit_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "idla/errors.hpp"
#include "idla/kernels.hpp"
#include "idla/walk.hpp"

namespace idla {

double ExitDistribution::total() const {
    double s = 0;
    for (const auto& [w, p] : probs) s += p;
    return s;
}

double ExitDistribution::prob_of(const Site& w) const {
    auto it = std::lower_bound(probs.begin(), probs.end(), w,
                               [](const auto& a, const Site& b) { return a.first < b; });
    if (it != probs.end() && it->first == w) return it->second;
    return 0.0;
}

double total_variation(const ExitDistribution& a, const ExitDistribution& b) {
    double tv = 0;
    std::size_t i = 0, j = 0;
    while (i < a.probs.size() || j < b.probs.size()) {
        if (j == b.probs.size() || (i < a.probs.size() && a.probs[i].first < b.probs[j].first)) {
            tv += std::abs(a.probs[i].second);
            ++i;
        } else if (i == a.probs.size() || b.probs[j].first < a.probs[i].first) {
            tv += std::abs(b.probs[j].second);
            ++j;
        } else {
            tv += std::abs(a.probs[i].second - b.probs[j].second);
            ++i;
            ++j;
        }
    }
    return tv / 2.0;
}

Aggregate aggregate_from_sites(int dim, const std::vector<Site>& sites) {
    Aggregate a(dim, sites.size() * 2);
    for (const Site& z : sites) a.insert(z);
    return a;
}

namespace {

constexpr double kAliveTol = 1e-13;
constexpr std::uint64_t kMaxSweeps = 4'000'000;

struct Kahan {
    double sum = 0, c = 0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

std::vector<Site> neighbors(const Site& z) {
    std::vector<Site> out;
    out.reserve(static_cast<std::size_t>(2 * z.dim));
    for (int axis = 0; axis < z.dim; ++axis) {
        Site p = z;
        ++p[axis];
        out.push_back(p);
        Site m = z;
        --m[axis];
        out.push_back(m);
    }
    return out;
}

ExitDistribution finish(std::map<Site, double>&& absorbed) {
    ExitDistribution dist;
    dist.probs.assign(absorbed.begin(), absorbed.end());
    return dist;
}

// Dense path: evolve p on a padded box through the masked-sweep kernel.
ExitDistribution dense_evolve(const std::vector<Site>& A, const Site& start, int d,
                              const Site& lo, const Site& hi) {
    std::array<std::ptrdiff_t, kMaxDim> ext{};
    std::ptrdiff_t volume = 1;
    for (int i = 0; i < d; ++i) {
        ext[static_cast<std::size_t>(i)] = hi[i] - lo[i] + 3; // +1 halo each side
        volume *= ext[static_cast<std::size_t>(i)];
    }
    std::array<std::ptrdiff_t, kMaxDim> strides{};
    std::ptrdiff_t s = 1;
    for (int i = d - 1; i >= 0; --i) {
        strides[static_cast<std::size_t>(i)] = s;
        s *= ext[static_cast<std::size_t>(i)];
    }
    const std::ptrdiff_t guard = strides[0]; // largest stride
    const std::size_t total = static_cast<std::size_t>(volume + 2 * guard);

    std::vector<double> pa(total, 0.0), pb(total, 0.0), mask(total, 0.0);
    double* p = pa.data() + guard;
    double* q = pb.data() + guard;
    double* m = mask.data() + guard;

    auto cell = [&](const Site& z) {
        std::ptrdiff_t idx = 0;
        for (int i = 0; i < d; ++i)
            idx += (static_cast<std::ptrdiff_t>(z[i]) - lo[i] + 1) * strides[static_cast<std::size_t>(i)];
        return idx;
    };

    for (const Site& z : A) m[cell(z)] = 1.0;
    p[cell(start)] = 1.0;

    // (boundary site, source cell) flow pairs
    std::map<Site, double> absorbed;
    std::vector<std::pair<double*, std::ptrdiff_t>> flows;
    {
        std::map<Site, std::vector<std::ptrdiff_t>> prelim;
        for (const Site& z : A)
            for (const Site& w : neighbors(z))
                if (m[cell(w)] == 0.0) prelim[w].push_back(cell(z));
        for (auto& [w, cells] : prelim) {
            auto [it, ok] = absorbed.emplace(w, 0.0);
            (void)ok;
            for (std::ptrdiff_t c : cells) flows.emplace_back(&it->second, c);
        }
    }

    const double inv2d = 1.0 / (2 * d);
    Kahan absorbed_total;
    std::array<std::ptrdiff_t, kMaxDim> kst = strides;
    for (std::uint64_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
        for (auto& [acc, c] : flows) {
            const double f = inv2d * p[c];
            *acc += f;
            absorbed_total.add(f);
        }
        if (1.0 - absorbed_total.sum <= kAliveTol) return finish(std::move(absorbed));
        kernels::masked_sweep(q, p, m, kst.data(), d, static_cast<std::size_t>(volume), inv2d);
        std::swap(p, q);
    }
    throw std::runtime_error("exit oracle failed to converge (dense)");
}

// Sparse fallback: same evolution on an indexed adjacency.
ExitDistribution sparse_evolve(const std::vector<Site>& A, const Site& start, int d) {
    const SitePacker packer(d);
    FlatSet64 inA(A.size() * 2);
    std::map<Site, std::size_t> index;
    for (std::size_t i = 0; i < A.size(); ++i) {
        inA.insert(packer.pack(A[i]));
        index.emplace(A[i], i);
    }
    const std::size_t N = A.size();
    const int faces = 2 * d;
    std::vector<std::ptrdiff_t> nb(N * static_cast<std::size_t>(faces), -1);
    std::map<Site, double> absorbed;
    std::vector<std::pair<double*, std::size_t>> flows;
    for (std::size_t i = 0; i < N; ++i) {
        int f = 0;
        for (const Site& w : neighbors(A[i])) {
            if (inA.contains(packer.pack(w)))
                nb[i * static_cast<std::size_t>(faces) + static_cast<std::size_t>(f)] =
                    static_cast<std::ptrdiff_t>(index.at(w));
            else {
                auto [it, ok] = absorbed.emplace(w, 0.0);
                (void)ok;
                flows.emplace_back(&it->second, i);
            }
            ++f;
        }
    }

    std::vector<double> p(N, 0.0), q(N, 0.0);
    p[index.at(start)] = 1.0;
    const double inv2d = 1.0 / faces;
    Kahan absorbed_total;
    for (std::uint64_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
        for (auto& [acc, i] : flows) {
            const double f = inv2d * p[i];
            *acc += f;
            absorbed_total.add(f);
        }
        if (1.0 - absorbed_total.sum <= kAliveTol) return finish(std::move(absorbed));
        for (std::size_t i = 0; i < N; ++i) {
            double t = 0;
            for (int f = 0; f < faces; ++f) {
                const std::ptrdiff_t j = nb[i * static_cast<std::size_t>(faces) + static_cast<std::size_t>(f)];
                if (j >= 0) t += p[static_cast<std::size_t>(j)];
            }
            q[i] = inv2d * t;
        }
        std::swap(p, q);
    }
    throw std::runtime_error("exit oracle failed to converge (sparse)");
}

} // namespace

ExitDistribution exact_exit_distribution(const std::vector<Site>& A, const Site& start,
                                         std::size_t size_cap, std::int64_t dense_cell_cap) {
    if (A.empty()) throw ConfigError("exit oracle needs a non-empty set");
    if (A.size() > size_cap)
        throw SizeCapExceeded("exit oracle set has " + std::to_string(A.size()) +
                              " sites, cap is " + std::to_string(size_cap));
    const int d = A.front().dim;
    bool has_start = false;
    Site lo = A.front(), hi = A.front();
    for (const Site& z : A) {
        if (z.dim != d) throw DimensionMismatch("exit oracle set dimension mismatch");
        if (z == start) has_start = true;
        for (int i = 0; i < d; ++i) {
            lo[i] = std::min(lo[i], z[i]);
            hi[i] = std::max(hi[i], z[i]);
        }
    }
    if (!has_start) throw ConfigError("exit oracle start must lie inside the set");

    std::int64_t volume = 1;
    for (int i = 0; i < d; ++i) {
        const std::int64_t e = static_cast<std::int64_t>(hi[i]) - lo[i] + 3;
        if (dense_cell_cap < 1 || volume > dense_cell_cap / e) {
            volume = -1;
            break;
        }
        volume *= e;
    }
    if (volume > 0) return dense_evolve(A, start, d, lo, hi);
    return sparse_evolve(A, start, d);
}

std::vector<std::pair<Site, BigRat>> exact_exit_distribution_rational(const std::vector<Site>& A,
                                                                      const Site& start) {
    if (A.empty()) throw ConfigError("exit oracle needs a non-empty set");
    if (A.size() > 500)
        throw SizeCapExceeded("rational oracle capped at 500 sites, got " +
                              std::to_string(A.size()));
    const int d = A.front().dim;
    std::map<Site, std::size_t> index;
    for (std::size_t i = 0; i < A.size(); ++i) index.emplace(A[i], i);
    if (!index.count(start)) throw ConfigError("exit oracle start must lie inside the set");

    const std::size_t N = A.size();
    // (I - P) g = e_start over the sites of A, exact.
    std::vector<std::vector<BigRat>> M(N, std::vector<BigRat>(N + 1, BigRat(0)));
    const BigRat w(1, 2 * d);
    for (std::size_t i = 0; i < N; ++i) {
        M[i][i] = 1;
        for (const Site& nb : neighbors(A[i])) {
            auto it = index.find(nb);
            if (it != index.end()) M[i][it->second] -= w;
        }
    }
    M[index.at(start)][N] = 1;

    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        while (piv < N && M[piv][col] == 0) ++piv;
        if (piv == N) throw SingularSystem("exit oracle system is singular");
        if (piv != col) std::swap(M[piv], M[col]);
        const BigRat inv = BigRat(1) / M[col][col];
        for (std::size_t j = col; j <= N; ++j) M[col][j] *= inv;
        for (std::size_t r = 0; r < N; ++r) {
            if (r == col || M[r][col] == 0) continue;
            const BigRat f = M[r][col];
            for (std::size_t j = col; j <= N; ++j) M[r][j] -= f * M[col][j];
        }
    }

    std::map<Site, BigRat> out;
    for (std::size_t i = 0; i < N; ++i) {
        const BigRat g = M[i][N];
        if (g == 0) continue;
        for (const Site& nb : neighbors(A[i]))
            if (!index.count(nb)) out[nb] += g * w;
    }
    return {out.begin(), out.end()};
}

ExitDistribution sample_exit_distribution(const Aggregate& A, const Site& start,
                                          std::size_t samples, const RngKey& key,
                                          std::uint32_t stream_source) {
    std::map<Site, std::int64_t> counts;
    for (std::size_t i = 0; i < samples; ++i) {
        RngStream s(key, Purpose::Experiment, stream_source, static_cast<std::uint32_t>(i));
        counts[run_until_exit(A, start, s).exit_site] += 1;
    }
    ExitDistribution dist;
    dist.probs.reserve(counts.size());
    for (const auto& [w, c] : counts)
        dist.probs.emplace_back(w, static_cast<double>(c) / static_cast<double>(samples));
    return dist;
}

} // namespace idla
