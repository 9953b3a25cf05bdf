#pragma once

#include <cstdint>
#include <random>

namespace lineage {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent child seed from a base seed and a tag.  Used to
/// hand each consumer (instance, resample attempt, verification trial) its
/// own stream without sharing state.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    return splitmix64(splitmix64(base) ^ splitmix64(tag * 0x9e3779b97f4a7c15ULL + 1));
}

/// Deterministic random stream.  Single-owner: one stream per consumer.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform in [0, n).  Rejection sampling, so the distribution is exact
    /// and independent of the standard library's uniform_int_distribution.
    std::uint64_t below(std::uint64_t n) {
        // First (2^64 mod n) raw values form a partial block; skip them.
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = gen_();
            if (x >= threshold) return x % n;
        }
    }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t in_range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

private:
    std::mt19937_64 gen_;
};

} // namespace lineage
