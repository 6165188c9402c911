#pragma once

#include <array>
#include <cstdint>

#include "idla/kernels.hpp"

namespace idla {

// Root randomness of an experiment. Streams derived from the same key and
// stream coordinates reproduce identical draw sequences under any schedule;
// nothing here carries mutable global state.
struct RngKey {
    std::uint64_t seed = 0;
    std::uint32_t replicate = 0;
};

// Disjoint stream families for the different consumers of randomness.
enum class Purpose : std::uint32_t {
    Walk = 0,
    Clock = 1,
    Experiment = 2,
};

namespace detail {

// byte -> face value, or -1 for the few rejected bytes; row f covers
// faces = f with the largest multiple of f below 256 accepted
struct FaceLut {
    std::int8_t v[17][256];
};

inline constexpr FaceLut make_face_lut() {
    FaceLut t{};
    for (int f = 2; f <= 16; ++f) {
        const int accept = (256 / f) * f;
        for (int r = 0; r < 256; ++r)
            t.v[f][r] = r < accept ? static_cast<std::int8_t>(r % f) : std::int8_t{-1};
    }
    return t;
}

inline constexpr FaceLut kFaceLut = make_face_lut();

} // namespace detail

// A counter-based stream: draw i is philox(key=seed, counter=(block, tag))
// word i-within-block. Stateless apart from the position, so copies replay.
class RngStream {
public:
    RngStream(const RngKey& key, Purpose purpose, std::uint32_t source, std::uint32_t particle)
        : k0_(static_cast<std::uint32_t>(key.seed)),
          k1_(static_cast<std::uint32_t>(key.seed >> 32)),
          c1_(particle ^ (static_cast<std::uint32_t>(purpose) << 29)),
          c2_(source),
          c3_(key.replicate) {}

    std::uint64_t next_u64() {
        if (pos_ == kBufU64) refill();
        const std::uint32_t lo = buf_[2 * pos_];
        const std::uint32_t hi = buf_[2 * pos_ + 1];
        ++pos_;
        return static_cast<std::uint64_t>(lo) | (static_cast<std::uint64_t>(hi) << 32);
    }

    // Exactly uniform on [0, bound) via multiply-shift with rejection.
    std::uint32_t next_below(std::uint32_t bound) {
        while (true) {
            const std::uint64_t x = next_u64();
            const unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
            const std::uint64_t low = static_cast<std::uint64_t>(m);
            if (low >= bound || low >= (-static_cast<std::uint64_t>(bound)) % bound)
                return static_cast<std::uint32_t>(m >> 64);
        }
    }

    // Exactly uniform on [0, faces) for faces <= 16, one pooled byte per
    // attempt through a rejection table (at most 4/256 bytes rejected, so
    // the reject branch is essentially never taken). This is the walks'
    // per-step draw.
    std::uint32_t next_face(std::uint32_t faces) {
        if (faces > 16) return next_below(faces);
        const std::int8_t* lut = face_lut_row(faces);
        while (true) {
            if (pool_bits_ < 8) {
                pool_ = next_u64();
                pool_bits_ = 64;
            }
            const std::int8_t v = lut[pool_ & 255u];
            pool_ >>= 8;
            pool_bits_ -= 8;
            if (v >= 0) return static_cast<std::uint32_t>(v);
        }
    }

    // Uniform double on [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    static const std::int8_t* face_lut_row(std::uint32_t faces) {
        return detail::kFaceLut.v[faces];
    }

private:
    static constexpr int kBufBlocks = 8;
    static constexpr int kBufU64 = 2 * kBufBlocks;

    void refill() {
        kernels::philox_batch(buf_.data(), k0_, k1_, next_block_, c1_, c2_, c3_, kBufBlocks);
        next_block_ += kBufBlocks;
        pos_ = 0;
    }

    std::uint32_t k0_, k1_, c1_, c2_, c3_;
    std::uint32_t next_block_ = 0;
    int pos_ = kBufU64;
    std::uint64_t pool_ = 0;
    int pool_bits_ = 0;
    std::array<std::uint32_t, 4 * kBufBlocks> buf_{};
};

} // namespace idla
