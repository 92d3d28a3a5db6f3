#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rtpz {

// Counter-based generator: output i is a pure function of (key, i), so any
// draw can be produced at random access and parallel workers that partition
// the index space reproduce the sequential stream bit for bit regardless of
// scheduling.  The word function is the SplitMix64 finalizer applied to
// key + (counter+1)*golden_gamma.  Not cryptographic.
class RngStream {
public:
    explicit RngStream(std::uint64_t key, std::uint64_t counter = 0)
        : key_(key), ctr_(counter) {}

    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

    // Hash-chain derivation of a subkey; used for per-trial and per-purpose
    // streams (hash of master seed and a path of salts).
    static std::uint64_t derive(std::uint64_t key, std::uint64_t salt) {
        return mix(key + 0x9e3779b97f4a7c15ULL * (salt + 0x632be59bd9b4e019ULL));
    }
    static std::uint64_t derive(std::uint64_t key, std::uint64_t s1, std::uint64_t s2) {
        return derive(derive(key, s1), s2);
    }

    std::uint64_t word_at(std::uint64_t index) const {
        return mix(key_ + (index + 1) * 0x9e3779b97f4a7c15ULL);
    }

    std::uint64_t next_u64() { return word_at(ctr_++); }

    // Uniform in [0,1) with 53 random mantissa bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Box-Muller, two counters per draw, no state carried between draws so a
    // draw's value depends only on (key, counter).
    double next_gaussian() {
        const double u1 = static_cast<double>(word_at(ctr_) >> 11) * 0x1.0p-53;
        const double u2 = static_cast<double>(word_at(ctr_ + 1) >> 11) * 0x1.0p-53;
        ctr_ += 2;
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    RngStream substream(std::uint64_t index) const {
        return RngStream(derive(key_, index));
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return ctr_; }
    void skip(std::uint64_t n) { ctr_ += n; }

private:
    std::uint64_t key_;
    std::uint64_t ctr_;
};

} // namespace rtpz
