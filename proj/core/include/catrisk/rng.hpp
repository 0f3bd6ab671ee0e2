#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace catrisk {

// Seeded random stream with cheap derivation of independent substreams.
//
// Streams are identified by a 64-bit key built from the root seed plus a
// path of names/indices (e.g. seed -> "simulate" -> trajectory i). Derivation
// uses the construction key, never the evolving engine state, so the same
// (seed, path) always yields the same stream regardless of what has been
// drawn from any other stream. This is what makes per-trajectory and
// per-resample results independent of execution order.
class rng_stream {
public:
    explicit rng_stream(std::uint64_t seed)
        : key_(mix(seed ^ 0x9e3779b97f4a7c15ull)), engine_(key_) {}

    // Child stream keyed by an integer (trajectory/resample index).
    rng_stream derive(std::uint64_t index) const {
        return rng_stream(raw_key{}, mix(key_ ^ mix(index + 0x632be59bd9b4e019ull)));
    }

    // Child stream keyed by a label ("fit", "simulate", "ruin", "fuzzy", ...).
    rng_stream derive(std::string_view name) const {
        std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a
        for (unsigned char c : name) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return rng_stream(raw_key{}, mix(key_ ^ mix(h)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on the open interval (0, 1); safe to feed into quantile
    // transforms and logarithms.
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    // Unit-rate exponential variate.
    double exponential() { return -std::log(uniform_open()); }

    // Uniform integer on {0, ..., n-1} by rejection (unbiased).
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    std::uint64_t key() const noexcept { return key_; }

private:
    struct raw_key {};
    rng_stream(raw_key, std::uint64_t key) : key_(key), engine_(key) {}

    // SplitMix64 finalizer; good avalanche for key derivation.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::mt19937_64 engine_;
};

} // namespace catrisk
