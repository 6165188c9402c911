#include "idla/kernels.hpp"

namespace idla::kernels {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void round10(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
    for (int r = 0; r < 10; ++r) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        const std::uint32_t n0 = hi1 ^ c[1] ^ k0;
        const std::uint32_t n2 = hi0 ^ c[3] ^ k1;
        c[0] = n0;
        c[1] = lo1;
        c[2] = n2;
        c[3] = lo0;
        k0 += kW0;
        k1 += kW1;
    }
}

} // namespace

void philox_batch_scalar(std::uint32_t* out, std::uint32_t k0, std::uint32_t k1,
                         std::uint32_t c0_base, std::uint32_t c1, std::uint32_t c2,
                         std::uint32_t c3, int nblocks) {
    for (int b = 0; b < nblocks; ++b) {
        std::uint32_t c[4] = {c0_base + static_cast<std::uint32_t>(b), c1, c2, c3};
        round10(c, k0, k1);
        out[4 * b + 0] = c[0];
        out[4 * b + 1] = c[1];
        out[4 * b + 2] = c[2];
        out[4 * b + 3] = c[3];
    }
}

void masked_sweep_scalar(double* dst, const double* src, const double* mask,
                         const std::ptrdiff_t* strides, int naxes, std::size_t n,
                         double inv2d) {
    for (std::size_t i = 0; i < n; ++i) {
        double t = src[i - strides[0]] + src[i + strides[0]];
        for (int a = 1; a < naxes; ++a)
            t += src[i - strides[a]] + src[i + strides[a]];
        dst[i] = mask[i] * (inv2d * t);
    }
}

} // namespace idla::kernels
