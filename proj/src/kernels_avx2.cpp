#include "idla/kernels.hpp"

#if defined(IDLA_HAVE_AVX2)

#include <immintrin.h>

namespace idla::kernels {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

// Per-32-bit-lane (hi, lo) of a * m for all 8 lanes.
inline void mulhilo8(__m256i a, __m256i m, __m256i& hi, __m256i& lo) {
    const __m256i even = _mm256_mul_epu32(a, m);
    const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
    lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA);
    hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

} // namespace

void philox_batch_avx2(std::uint32_t* out, std::uint32_t k0, std::uint32_t k1,
                       std::uint32_t c0_base, std::uint32_t c1, std::uint32_t c2,
                       std::uint32_t c3, int nblocks) {
    int b = 0;
    for (; b + 8 <= nblocks; b += 8) {
        const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
        __m256i C0 = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(c0_base + static_cast<std::uint32_t>(b))), lane);
        __m256i C1 = _mm256_set1_epi32(static_cast<int>(c1));
        __m256i C2 = _mm256_set1_epi32(static_cast<int>(c2));
        __m256i C3 = _mm256_set1_epi32(static_cast<int>(c3));
        __m256i K0 = _mm256_set1_epi32(static_cast<int>(k0));
        __m256i K1 = _mm256_set1_epi32(static_cast<int>(k1));
        const __m256i M0 = _mm256_set1_epi32(static_cast<int>(kM0));
        const __m256i M1 = _mm256_set1_epi32(static_cast<int>(kM1));
        const __m256i W0 = _mm256_set1_epi32(static_cast<int>(kW0));
        const __m256i W1 = _mm256_set1_epi32(static_cast<int>(kW1));

        for (int r = 0; r < 10; ++r) {
            __m256i hi0, lo0, hi1, lo1;
            mulhilo8(C0, M0, hi0, lo0);
            mulhilo8(C2, M1, hi1, lo1);
            const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, C1), K0);
            const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, C3), K1);
            C0 = n0;
            C1 = lo1;
            C2 = n2;
            C3 = lo0;
            K0 = _mm256_add_epi32(K0, W0);
            K1 = _mm256_add_epi32(K1, W1);
        }

        // transpose word vectors into block-major order
        const __m256i a0 = _mm256_unpacklo_epi32(C0, C1); // b0 b1 | b4 b5 (words 0,1)
        const __m256i a1 = _mm256_unpackhi_epi32(C0, C1); // b2 b3 | b6 b7
        const __m256i a2 = _mm256_unpacklo_epi32(C2, C3);
        const __m256i a3 = _mm256_unpackhi_epi32(C2, C3);
        const __m256i q0 = _mm256_unpacklo_epi64(a0, a2); // block0 | block4
        const __m256i q1 = _mm256_unpackhi_epi64(a0, a2); // block1 | block5
        const __m256i q2 = _mm256_unpacklo_epi64(a1, a3); // block2 | block6
        const __m256i q3 = _mm256_unpackhi_epi64(a1, a3); // block3 | block7

        std::uint32_t* o = out + 4 * b;
        _mm_storeu_si128(reinterpret_cast<__m128i*>(o + 0), _mm256_castsi256_si128(q0));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(o + 4), _mm256_castsi256_si128(q1));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(o + 8), _mm256_castsi256_si128(q2));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(o + 12), _mm256_castsi256_si128(q3));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(o + 16), _mm256_extracti128_si256(q0, 1));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(o + 20), _mm256_extracti128_si256(q1, 1));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(o + 24), _mm256_extracti128_si256(q2, 1));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(o + 28), _mm256_extracti128_si256(q3, 1));
    }
    if (b < nblocks)
        philox_batch_scalar(out + 4 * b, k0, k1, c0_base + static_cast<std::uint32_t>(b),
                            c1, c2, c3, nblocks - b);
}

void masked_sweep_avx2(double* dst, const double* src, const double* mask,
                       const std::ptrdiff_t* strides, int naxes, std::size_t n,
                       double inv2d) {
    const __m256d k = _mm256_set1_pd(inv2d);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_add_pd(_mm256_loadu_pd(src + i - strides[0]),
                                  _mm256_loadu_pd(src + i + strides[0]));
        for (int a = 1; a < naxes; ++a)
            t = _mm256_add_pd(t, _mm256_add_pd(_mm256_loadu_pd(src + i - strides[a]),
                                               _mm256_loadu_pd(src + i + strides[a])));
        const __m256d r = _mm256_mul_pd(_mm256_loadu_pd(mask + i), _mm256_mul_pd(k, t));
        _mm256_storeu_pd(dst + i, r);
    }
    for (; i < n; ++i) {
        double t = src[i - strides[0]] + src[i + strides[0]];
        for (int a = 1; a < naxes; ++a)
            t += src[i - strides[a]] + src[i + strides[a]];
        dst[i] = mask[i] * (inv2d * t);
    }
}

} // namespace idla::kernels

#endif // IDLA_HAVE_AVX2
