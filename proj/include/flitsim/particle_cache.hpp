#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "flitsim/common.hpp"
#include "flitsim/framing.hpp"
#include "flitsim/inz.hpp"

namespace flitsim {

// Position packet as seen by the cache: a header plus a 16-byte payload of
// three coordinates and one id/static word.
struct PositionPacket {
    std::uint64_t header_bits = 0;
    std::array<std::int32_t, 3> coord{0, 0, 0};
    std::uint32_t id = 0;  // particle id; static across the run
    bool operator==(const PositionPacket&) const = default;

    Quad payload() const {
        Quad q;
        q.w[0] = coord[0];
        q.w[1] = coord[1];
        q.w[2] = coord[2];
        q.w[3] = static_cast<std::int32_t>(id);
        return q;
    }
    static PositionPacket from_payload(std::uint64_t header_bits, const Quad& q) {
        PositionPacket p;
        p.header_bits = header_bits;
        p.coord = {q.w[0], q.w[1], q.w[2]};
        p.id = static_cast<std::uint32_t>(q.w[3]);
        return p;
    }
};

// One cached particle. The header and id word are the static fields replaced
// by the cache index on hits; D0/D1/D2 are the per-coordinate finite
// differences backing the quadratic extrapolator. D1/D2 hold 12-bit values.
struct ParticleCacheEntry {
    std::uint32_t tag = 0;
    std::uint64_t header_bits = 0;
    std::array<std::int32_t, 3> d0{0, 0, 0};
    std::array<std::int16_t, 3> d1{0, 0, 0};
    std::array<std::int16_t, 3> d2{0, 0, 0};
    std::uint32_t last_hit_step = 0;
    bool valid = false;

    bool operator==(const ParticleCacheEntry&) const = default;
};

// Predicted position: D0 + D1 + D2 per coordinate, wrapping 32-bit arithmetic.
// Exact for constant, linear, and quadratic integer motion once history fills.
std::array<std::int32_t, 3> extrapolate(const ParticleCacheEntry& e);

// D0' = x, D1' = x - D0, D2' = x - D0 - D1 (wrapping). If any coordinate's new
// D1 or D2 leaves the signed 12-bit range, both difference vectors reset to
// zero; both cache ends compute the same reset from the same inputs.
void update_history(ParticleCacheEntry& e, const std::array<std::int32_t, 3>& actual);

inline constexpr int kCacheSets = 256;
inline constexpr int kCacheWays = 4;

// Four-way set-associative cache of 1024 particle entries, one copy at each
// end of a channel direction. Both copies see the same record stream in the
// same order, so they stay bit-identical without any synchronization traffic.
class ParticleCache {
public:
    explicit ParticleCache(std::uint32_t eviction_threshold = 4)
        : eviction_threshold_(eviction_threshold) {}

    // Send side: convert an outgoing position packet into a wire record and
    // update the cache. `inz` selects compressed or raw payload encoding.
    WireRecord send_side_process(const PositionPacket& pkt, bool inz = true);

    // Receive side: reconstruct the original packet from a wire record while
    // applying the identical cache mutation. Throws ProtocolError when the
    // record is inconsistent with local state (indicates desynchronization).
    PositionPacket receive_side_process(const WireRecord& rec);

    // End-of-time-step marker observed on this channel.
    void tick_timestep() { ++step_counter_; }

    std::uint32_t step_counter() const { return step_counter_; }
    std::uint32_t eviction_threshold() const { return eviction_threshold_; }
    const ParticleCacheEntry& entry(int set, int way) const {
        return entries_[static_cast<std::size_t>(set) * kCacheWays + static_cast<std::size_t>(way)];
    }

    bool operator==(const ParticleCache& o) const {
        return entries_ == o.entries_ && step_counter_ == o.step_counter_ &&
               eviction_threshold_ == o.eviction_threshold_;
    }

    struct Counters {
        std::uint64_t hits = 0, allocs = 0, bypasses = 0, evictions = 0, overflow_resets = 0;
    };
    const Counters& counters() const { return counters_; }

private:
    static int set_of(std::uint32_t id) { return static_cast<int>(id & 0xFF); }
    ParticleCacheEntry& at(int set, int way) {
        return entries_[static_cast<std::size_t>(set) * kCacheWays + static_cast<std::size_t>(way)];
    }
    int find_way(int set, std::uint32_t tag) const;
    // Lowest invalid way, else lowest stale way (eviction), else -1 (bypass).
    int choose_victim(int set) const;
    void apply_hit(ParticleCacheEntry& e, const std::array<std::int32_t, 3>& actual);

    std::array<ParticleCacheEntry, kCacheSets * kCacheWays> entries_{};
    std::uint32_t step_counter_ = 0;
    std::uint32_t eviction_threshold_;
    Counters counters_;
};

}  // namespace flitsim
