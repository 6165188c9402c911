#include <doctest.h>

#include <array>
#include <cmath>
#include <cstring>
#include <vector>

#include "idla/kernels.hpp"
#include "idla/rng.hpp"

using namespace idla;

namespace {

std::array<std::uint32_t, 4> one_block(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                                       std::uint32_t c3, std::uint32_t k0, std::uint32_t k1) {
    std::array<std::uint32_t, 4> out{};
    kernels::philox_batch_scalar(out.data(), k0, k1, c0, c1, c2, c3, 1);
    return out;
}

} // namespace

TEST_CASE("philox 4x32-10 known answers") {
    CHECK(one_block(0, 0, 0, 0, 0, 0) ==
          std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(one_block(0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u, 0xa4093822u, 0x299f31d0u) ==
          std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
    CHECK(one_block(1, 2, 3, 4, 5, 6) ==
          std::array<std::uint32_t, 4>{0xc0c839bcu, 0x889c87c5u, 0x61986739u, 0x2d4623d0u});
    CHECK(one_block(0xdeadbeefu, 0, 0xcafef00du, 0, 0x12345678u, 0x9abcdef0u) ==
          std::array<std::uint32_t, 4>{0xbc62a63cu, 0x10a62c95u, 0x98812aa1u, 0x1ce0f499u});
}

TEST_CASE("simd philox variant matches the scalar reference bit for bit") {
    INFO("active variant: ", kernels::active_variant());
    std::vector<std::uint32_t> a(4 * 37), b(4 * 37);
    for (std::uint32_t trial = 0; trial < 8; ++trial) {
        const std::uint32_t k0 = 0x9e3779b9u * trial, k1 = ~trial;
        const std::uint32_t c1 = trial * 17 + 3, c2 = 0xabcd0123u + trial, c3 = trial << 20;
        kernels::philox_batch_scalar(a.data(), k0, k1, 0xfffffff0u, c1, c2, c3, 37);
        kernels::philox_batch(b.data(), k0, k1, 0xfffffff0u, c1, c2, c3, 37);
        CHECK(std::memcmp(a.data(), b.data(), a.size() * 4) == 0);
    }
}

TEST_CASE("simd masked sweep matches the scalar reference bit for bit") {
    const std::ptrdiff_t strides[3] = {35, 5, 1};
    const std::size_t n = 175;
    const std::size_t guard = 35;
    std::vector<double> src(n + 2 * guard, 0.0), mask(n + 2 * guard, 0.0);
    std::vector<double> d1(n + 2 * guard, 0.0), d2(n + 2 * guard, 0.0);
    std::uint64_t s = 12345;
    auto rnd = [&s]() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    };
    for (std::size_t i = 0; i < n; ++i) {
        src[guard + i] = rnd();
        mask[guard + i] = rnd() < 0.7 ? 1.0 : 0.0;
    }
    kernels::masked_sweep_scalar(d1.data() + guard, src.data() + guard, mask.data() + guard,
                                 strides, 3, n, 1.0 / 6.0);
    kernels::masked_sweep(d2.data() + guard, src.data() + guard, mask.data() + guard, strides, 3,
                          n, 1.0 / 6.0);
    CHECK(std::memcmp(d1.data(), d2.data(), d1.size() * sizeof(double)) == 0);
}

TEST_CASE("streams are reproducible and position-addressable") {
    const RngKey key{0x0123456789abcdefull, 4};
    RngStream s1(key, Purpose::Walk, 10, 2);
    RngStream s2(key, Purpose::Walk, 10, 2);
    for (int i = 0; i < 100; ++i) CHECK(s1.next_u64() == s2.next_u64());

    // a different particle index gives a different stream
    RngStream s3(key, Purpose::Walk, 10, 3);
    bool differs = false;
    RngStream s4(key, Purpose::Walk, 10, 2);
    for (int i = 0; i < 8; ++i) differs |= s3.next_u64() != s4.next_u64();
    CHECK(differs);

    // draws come straight from philox blocks of the stream's counter lane
    RngStream s5(key, Purpose::Walk, 7, 1);
    std::uint32_t words[4 * 8];
    kernels::philox_batch_scalar(words, static_cast<std::uint32_t>(key.seed),
                                 static_cast<std::uint32_t>(key.seed >> 32), 0,
                                 1u ^ (0u << 29), 7, 4, 8);
    for (int i = 0; i < 16; ++i) {
        const std::uint64_t expect =
            static_cast<std::uint64_t>(words[2 * i]) |
            (static_cast<std::uint64_t>(words[2 * i + 1]) << 32);
        CHECK(s5.next_u64() == expect);
    }
}

TEST_CASE("bounded draws are uniform") {
    const RngKey key{99, 0};
    RngStream s(key, Purpose::Experiment, 0, 0);
    const int faces = 6;
    std::array<std::int64_t, 6> hist{};
    const std::int64_t N = 1'000'000;
    for (std::int64_t i = 0; i < N; ++i) ++hist[s.next_below(faces)];
    const double expect = static_cast<double>(N) / faces;
    const double sigma = std::sqrt(expect * (1.0 - 1.0 / faces));
    for (int f = 0; f < faces; ++f)
        CHECK(std::abs(static_cast<double>(hist[static_cast<std::size_t>(f)]) - expect) <=
              3.0 * sigma);
}

TEST_CASE("unit doubles stay in [0,1) with a sane mean") {
    const RngKey key{1234, 0};
    RngStream s(key, Purpose::Clock, 1, 1);
    double sum = 0;
    const int N = 200'000;
    for (int i = 0; i < N; ++i) {
        const double u = s.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    const double mean = sum / N;
    CHECK(std::abs(mean - 0.5) < 3.0 / std::sqrt(12.0 * N));
}
