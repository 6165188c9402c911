#pragma once

#include <cstdint>
#include <vector>

#include "idla/site.hpp"

namespace idla {

// Open-addressing set of packed site keys. Insert-only; growth at 60% load.
class FlatSet64 {
public:
    explicit FlatSet64(std::size_t expected = 0) { rehash(capacity_for(expected)); }

    bool contains(std::uint64_t key) const {
        if (key == kSentinel) return has_sentinel_;
        std::size_t i = index_of(key);
        while (slots_[i] != kSentinel) {
            if (slots_[i] == key) return true;
            i = (i + 1) & mask_;
        }
        return false;
    }

    // true if the key was newly inserted
    bool insert(std::uint64_t key) {
        if (key == kSentinel) {
            const bool fresh = !has_sentinel_;
            has_sentinel_ = true;
            if (fresh) ++size_;
            return fresh;
        }
        std::size_t i = index_of(key);
        while (slots_[i] != kSentinel) {
            if (slots_[i] == key) return false;
            i = (i + 1) & mask_;
        }
        slots_[i] = key;
        ++size_;
        if (size_ * 5 > slots_.size() * 3) grow();
        return true;
    }

    std::size_t size() const { return size_; }

    template <class F>
    void for_each(F&& fn) const {
        if (has_sentinel_) fn(kSentinel);
        for (std::uint64_t k : slots_)
            if (k != kSentinel) fn(k);
    }

    void reserve(std::size_t expected) {
        const std::size_t want = capacity_for(expected);
        if (want > slots_.size()) grow_to(want);
    }

    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

private:
    static constexpr std::uint64_t kSentinel = ~std::uint64_t{0};

    static std::size_t capacity_for(std::size_t expected) {
        std::size_t cap = 64;
        while (cap * 3 < (expected + 1) * 5) cap <<= 1;
        return cap;
    }

    std::size_t index_of(std::uint64_t key) const { return static_cast<std::size_t>(mix(key)) & mask_; }

    void rehash(std::size_t cap) {
        slots_.assign(cap, kSentinel);
        mask_ = cap - 1;
    }

    void grow() { grow_to(slots_.size() * 2); }

    void grow_to(std::size_t cap) {
        std::vector<std::uint64_t> old;
        old.swap(slots_);
        rehash(cap);
        for (std::uint64_t k : old) {
            if (k == kSentinel) continue;
            std::size_t i = index_of(k);
            while (slots_[i] != kSentinel) i = (i + 1) & mask_;
            slots_[i] = k;
        }
    }

    std::vector<std::uint64_t> slots_;
    std::size_t mask_ = 0;
    std::size_t size_ = 0;
    bool has_sentinel_ = false;
};

// Per-line bookkeeping: line key (z_2..z_d packed) -> extreme |z_1| and count.
struct LineStat {
    Coord max_abs_x = 0;
    std::int32_t count = 0;
};

class LineMap {
public:
    explicit LineMap(std::size_t expected = 0) { rehash(capacity_for(expected)); }

    LineStat& find_or_insert(std::uint64_t key) {
        if (key == kSentinel) {
            if (!has_sentinel_) {
                has_sentinel_ = true;
                ++size_;
                sentinel_stat_ = LineStat{};
            }
            return sentinel_stat_;
        }
        std::size_t i = index_of(key);
        while (slots_[i] != kSentinel) {
            if (slots_[i] == key) return values_[i];
            i = (i + 1) & mask_;
        }
        slots_[i] = key;
        values_[i] = LineStat{};
        ++size_;
        if (size_ * 5 > slots_.size() * 3) {
            grow();
            return find_or_insert(key);
        }
        return values_[i];
    }

    const LineStat* find(std::uint64_t key) const {
        if (key == kSentinel) return has_sentinel_ ? &sentinel_stat_ : nullptr;
        std::size_t i = index_of(key);
        while (slots_[i] != kSentinel) {
            if (slots_[i] == key) return &values_[i];
            i = (i + 1) & mask_;
        }
        return nullptr;
    }

    std::size_t size() const { return size_; }

    template <class F>
    void for_each(F&& fn) const {
        if (has_sentinel_) fn(kSentinel, sentinel_stat_);
        for (std::size_t i = 0; i < slots_.size(); ++i)
            if (slots_[i] != kSentinel) fn(slots_[i], values_[i]);
    }

private:
    static constexpr std::uint64_t kSentinel = ~std::uint64_t{0};

    static std::size_t capacity_for(std::size_t expected) {
        std::size_t cap = 64;
        while (cap * 3 < (expected + 1) * 5) cap <<= 1;
        return cap;
    }

    std::size_t index_of(std::uint64_t key) const {
        return static_cast<std::size_t>(FlatSet64::mix(key)) & mask_;
    }

    void rehash(std::size_t cap) {
        slots_.assign(cap, kSentinel);
        values_.assign(cap, LineStat{});
        mask_ = cap - 1;
    }

    void grow() {
        std::vector<std::uint64_t> ok;
        std::vector<LineStat> ov;
        ok.swap(slots_);
        ov.swap(values_);
        rehash(ok.size() * 2);
        for (std::size_t i = 0; i < ok.size(); ++i) {
            if (ok[i] == kSentinel) continue;
            std::size_t j = index_of(ok[i]);
            while (slots_[j] != kSentinel) j = (j + 1) & mask_;
            slots_[j] = ok[i];
            values_[j] = ov[i];
        }
    }

    std::vector<std::uint64_t> slots_;
    std::vector<LineStat> values_;
    std::size_t mask_ = 0;
    std::size_t size_ = 0;
    bool has_sentinel_ = false;
    LineStat sentinel_stat_{};
};

// Occupied-site storage. Either a plain hash set, or a dense bitmap over a
// box with a hash spill for the rare site outside it. The bitmap is the fast
// path for slab-shaped builds whose extent is known up front; both backends
// answer identically.
class OccupancyStore {
public:
    static OccupancyStore hashed(int dim, std::size_t expected = 0) {
        OccupancyStore s(dim, expected);
        return s;
    }

    static OccupancyStore boxed(int dim, const Site& lo, const Site& hi, std::size_t expected = 0);

    bool contains(const Site& z, std::uint64_t packed) const {
        if (dense_) {
            const std::int64_t idx = box_index(z);
            if (idx >= 0)
                return (bits_[static_cast<std::size_t>(idx >> 6)] >> (idx & 63)) & 1u;
        }
        return set_.contains(packed);
    }

    bool insert(const Site& z, std::uint64_t packed) {
        if (dense_) {
            const std::int64_t idx = box_index(z);
            if (idx >= 0) {
                std::uint64_t& w = bits_[static_cast<std::size_t>(idx >> 6)];
                const std::uint64_t bit = std::uint64_t{1} << (idx & 63);
                if (w & bit) return false;
                w |= bit;
                return true;
            }
        }
        return set_.insert(packed);
    }

    template <class F>
    void for_each_site(F&& fn) const {
        if (dense_) {
            Site z = Site::zero(packer_.dim());
            for (std::size_t w = 0; w < bits_.size(); ++w) {
                std::uint64_t word = bits_[w];
                while (word) {
                    const int b = __builtin_ctzll(word);
                    word &= word - 1;
                    decode_box_index(static_cast<std::int64_t>(w) * 64 + b, z);
                    fn(z);
                }
            }
        }
        set_.for_each([&](std::uint64_t key) { fn(packer_.unpack(key)); });
    }

    const SitePacker& packer() const { return packer_; }

    // Raw view of the dense backend for the specialized walk kernels.
    struct DenseView {
        const std::uint64_t* bits = nullptr;
        const std::int64_t* lo = nullptr;
        const std::int64_t* ext = nullptr;
        const std::int64_t* stride = nullptr;
    };

    bool is_dense() const { return dense_; }
    DenseView dense_view() const { return {bits_.data(), lo_.data(), ext_.data(), stride_.data()}; }
    const FlatSet64& spill() const { return set_; }

private:
    OccupancyStore(int dim, std::size_t expected) : packer_(dim), set_(expected) {}

    // axis 0 is stride 1: walks move along it most locally
    std::int64_t box_index(const Site& z) const {
        std::int64_t idx = 0;
        for (int i = 0; i < packer_.dim(); ++i) {
            const std::uint64_t v = static_cast<std::uint64_t>(
                static_cast<std::int64_t>(z[i]) - lo_[static_cast<std::size_t>(i)]);
            if (v >= static_cast<std::uint64_t>(ext_[static_cast<std::size_t>(i)])) return -1;
            idx += static_cast<std::int64_t>(v) * stride_[static_cast<std::size_t>(i)];
        }
        return idx;
    }

    void decode_box_index(std::int64_t idx, Site& z) const {
        z[0] = static_cast<Coord>(idx % ext_[0] + lo_[0]);
        idx /= ext_[0];
        for (int i = packer_.dim() - 1; i >= 1; --i) {
            const std::int64_t e = ext_[static_cast<std::size_t>(i)];
            z[i] = static_cast<Coord>(idx % e + lo_[static_cast<std::size_t>(i)]);
            idx /= e;
        }
    }

    SitePacker packer_;
    FlatSet64 set_;
    bool dense_ = false;
    std::array<std::int64_t, kMaxDim> lo_{};
    std::array<std::int64_t, kMaxDim> ext_{};
    std::array<std::int64_t, kMaxDim> stride_{};
    std::vector<std::uint64_t> bits_;
};

} // namespace idla
