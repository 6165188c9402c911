#include "idla/kernels.hpp"

namespace idla::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(IDLA_HAVE_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

PhiloxBatchFn pick_philox(bool scalar_only) {
#if defined(IDLA_HAVE_AVX2)
    if (!scalar_only && cpu_has_avx2()) return philox_batch_avx2;
#endif
    (void)scalar_only;
    return philox_batch_scalar;
}

SweepFn pick_sweep(bool scalar_only) {
#if defined(IDLA_HAVE_AVX2)
    if (!scalar_only && cpu_has_avx2()) return masked_sweep_avx2;
#endif
    (void)scalar_only;
    return masked_sweep_scalar;
}

} // namespace

PhiloxBatchFn philox_batch = pick_philox(false);
SweepFn masked_sweep = pick_sweep(false);

const char* active_variant() {
    return philox_batch == philox_batch_scalar ? "scalar" : "avx2";
}

void force_scalar(bool on) {
    philox_batch = pick_philox(on);
    masked_sweep = pick_sweep(on);
}

} // namespace idla::kernels
