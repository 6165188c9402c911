#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner kernels. Each kernel has a scalar reference
// implementation and an AVX2 variant; the function pointers below are bound
// at startup to the best variant the CPU supports. Variants are bit-exact
// equivalents of the reference (integer kernels trivially, floating-point
// kernels because every cell performs the identical operation sequence and
// contraction is disabled), so results never depend on the selection.
namespace idla::kernels {

// Philox 4x32-10 counter-based generator. One block maps a 128-bit counter
// (c0, c1, c2, c3) and 64-bit key (k0, k1) to four 32-bit words.
// Fills out[4*b + w], w = 0..3, for counters (c0_base + b, c1, c2, c3),
// b = 0..nblocks-1.
using PhiloxBatchFn = void (*)(std::uint32_t* out, std::uint32_t k0, std::uint32_t k1,
                               std::uint32_t c0_base, std::uint32_t c1, std::uint32_t c2,
                               std::uint32_t c3, int nblocks);

// One masked diffusion sweep over a flat padded grid:
//   dst[i] = mask[i] * inv2d * sum_axis (src[i - stride] + src[i + stride])
// for i = 0..n-1. The caller guarantees that reads up to the largest stride
// beyond [0, n) land in zeroed guard cells.
using SweepFn = void (*)(double* dst, const double* src, const double* mask,
                         const std::ptrdiff_t* strides, int naxes, std::size_t n,
                         double inv2d);

void philox_batch_scalar(std::uint32_t* out, std::uint32_t k0, std::uint32_t k1,
                         std::uint32_t c0_base, std::uint32_t c1, std::uint32_t c2,
                         std::uint32_t c3, int nblocks);
void masked_sweep_scalar(double* dst, const double* src, const double* mask,
                         const std::ptrdiff_t* strides, int naxes, std::size_t n,
                         double inv2d);

#if defined(IDLA_HAVE_AVX2)
void philox_batch_avx2(std::uint32_t* out, std::uint32_t k0, std::uint32_t k1,
                       std::uint32_t c0_base, std::uint32_t c1, std::uint32_t c2,
                       std::uint32_t c3, int nblocks);
void masked_sweep_avx2(double* dst, const double* src, const double* mask,
                       const std::ptrdiff_t* strides, int naxes, std::size_t n,
                       double inv2d);
#endif

extern PhiloxBatchFn philox_batch;
extern SweepFn masked_sweep;

// Name of the variant currently bound ("scalar" or "avx2").
const char* active_variant();

// Pin the scalar reference (tests, benchmarks); pass false to re-probe.
void force_scalar(bool on);

} // namespace idla::kernels
