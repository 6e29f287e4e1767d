#pragma once

#include <cstdint>

namespace flitsim {

// splitmix64; used both as a stream generator and to derive per-packet seeds.
// Self-contained so results are identical across platforms and library versions.
class Rng {
public:
    Rng() : state_(0x9e3779b97f4a7c15ull) {}
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Rejection-free multiply-shift; bias < 2^-32 for n < 2^32.
    std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    bool flip() { return (next() >> 63) != 0; }

    // Uniform in [lo, hi] inclusive.
    std::int32_t range(std::int32_t lo, std::int32_t hi) {
        return lo + static_cast<std::int32_t>(below(static_cast<std::uint32_t>(hi - lo + 1)));
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

// Derives independent substreams from a root seed, e.g. workload vs routing.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t salt) {
    Rng r(root ^ (salt * 0xd6e8feb86659fd93ull + 0x2545f4914f6cdd1dull));
    r.next();
    return r.next();
}

}  // namespace flitsim
