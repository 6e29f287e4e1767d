#include "flitsim/particle_cache.hpp"

#include <string>

namespace flitsim {

namespace {

constexpr std::int32_t kDiff12Min = -2048;
constexpr std::int32_t kDiff12Max = 2047;

Quad delta_quad(const std::array<std::int32_t, 3>& d) {
    Quad q;
    q.w[0] = d[0];
    q.w[1] = d[1];
    q.w[2] = d[2];
    q.w[3] = 0;
    return q;
}

}  // namespace

std::array<std::int32_t, 3> extrapolate(const ParticleCacheEntry& e) {
    std::array<std::int32_t, 3> p{};
    for (int i = 0; i < 3; ++i)
        p[static_cast<std::size_t>(i)] =
            wrap_add_i32(wrap_add_i32(e.d0[static_cast<std::size_t>(i)], e.d1[static_cast<std::size_t>(i)]),
                         e.d2[static_cast<std::size_t>(i)]);
    return p;
}

void update_history(ParticleCacheEntry& e, const std::array<std::int32_t, 3>& actual) {
    std::array<std::int32_t, 3> nd1{}, nd2{};
    bool overflow = false;
    for (std::size_t i = 0; i < 3; ++i) {
        nd1[i] = wrap_sub_i32(actual[i], e.d0[i]);
        nd2[i] = wrap_sub_i32(nd1[i], e.d1[i]);
        if (nd1[i] < kDiff12Min || nd1[i] > kDiff12Max || nd2[i] < kDiff12Min || nd2[i] > kDiff12Max)
            overflow = true;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        e.d0[i] = actual[i];
        e.d1[i] = overflow ? 0 : static_cast<std::int16_t>(nd1[i]);
        e.d2[i] = overflow ? 0 : static_cast<std::int16_t>(nd2[i]);
    }
}

int ParticleCache::find_way(int set, std::uint32_t tag) const {
    for (int w = 0; w < kCacheWays; ++w) {
        const auto& e = entry(set, w);
        if (e.valid && e.tag == tag) return w;
    }
    return -1;
}

int ParticleCache::choose_victim(int set) const {
    for (int w = 0; w < kCacheWays; ++w)
        if (!entry(set, w).valid) return w;
    for (int w = 0; w < kCacheWays; ++w) {
        const auto& e = entry(set, w);
        if (step_counter_ - e.last_hit_step > eviction_threshold_) return w;
    }
    return -1;
}

void ParticleCache::apply_hit(ParticleCacheEntry& e, const std::array<std::int32_t, 3>& actual) {
    const auto d1_before = e.d1;
    update_history(e, actual);
    if (e.d1 != d1_before && e.d1[0] == 0 && e.d1[1] == 0 && e.d1[2] == 0 && e.d2[0] == 0 &&
        e.d2[1] == 0 && e.d2[2] == 0) {
        // Heuristic counter only; correctness does not depend on it.
        ++counters_.overflow_resets;
    }
    e.last_hit_step = step_counter_;
}

WireRecord ParticleCache::send_side_process(const PositionPacket& pkt, bool inz) {
    const int set = set_of(pkt.id);
    const int way = find_way(set, pkt.id);
    WireRecord rec;
    if (way >= 0) {
        ParticleCacheEntry& e = at(set, way);
        const auto pred = extrapolate(e);
        std::array<std::int32_t, 3> delta{};
        for (std::size_t i = 0; i < 3; ++i) delta[i] = wrap_sub_i32(pkt.coord[i], pred[i]);
        apply_hit(e, pkt.coord);
        ++counters_.hits;
        rec.kind = RecordKind::CompressedPosition;
        rec.cache_index = static_cast<std::uint16_t>((set << 2) | way);
        rec.payload = inz ? encode_quad(delta_quad(delta)) : encode_quad_raw(delta_quad(delta));
        return rec;
    }

    const int victim = choose_victim(set);
    rec.header_bits = pkt.header_bits;
    rec.payload = inz ? encode_quad(pkt.payload()) : encode_quad_raw(pkt.payload());
    if (victim >= 0) {
        ParticleCacheEntry& e = at(set, victim);
        if (e.valid) ++counters_.evictions;
        e = ParticleCacheEntry{};
        e.tag = pkt.id;
        e.header_bits = pkt.header_bits;
        e.d0 = pkt.coord;
        e.last_hit_step = step_counter_;
        e.valid = true;
        ++counters_.allocs;
        rec.kind = RecordKind::PositionAllocate;
    } else {
        ++counters_.bypasses;
        rec.kind = RecordKind::PositionBypass;
    }
    return rec;
}

PositionPacket ParticleCache::receive_side_process(const WireRecord& rec) {
    switch (rec.kind) {
        case RecordKind::CompressedPosition: {
            const int set = rec.cache_index >> 2;
            const int way = rec.cache_index & 3;
            if (set >= kCacheSets || way >= kCacheWays)
                throw ProtocolError("compressed position index " + std::to_string(rec.cache_index) +
                                    " out of range");
            ParticleCacheEntry& e = at(set, way);
            if (!e.valid)
                throw ProtocolError("compressed position hit invalid entry " +
                                    std::to_string(rec.cache_index) + " (cache desynchronization)");
            const Quad dq = decode_quad(rec.payload);
            const auto pred = extrapolate(e);
            std::array<std::int32_t, 3> actual{};
            for (std::size_t i = 0; i < 3; ++i)
                actual[i] = wrap_add_i32(pred[i], dq.w[i]);
            PositionPacket pkt;
            pkt.header_bits = e.header_bits;
            pkt.coord = actual;
            pkt.id = e.tag;
            apply_hit(e, actual);
            ++counters_.hits;
            return pkt;
        }
        case RecordKind::PositionAllocate: {
            const auto pkt = PositionPacket::from_payload(rec.header_bits, decode_quad(rec.payload));
            const int set = set_of(pkt.id);
            if (find_way(set, pkt.id) >= 0)
                throw ProtocolError("allocate record for already-cached particle " +
                                    std::to_string(pkt.id) + " (cache desynchronization)");
            const int victim = choose_victim(set);
            if (victim < 0)
                throw ProtocolError("allocate record but no free or stale way for particle " +
                                    std::to_string(pkt.id) + " (cache desynchronization)");
            ParticleCacheEntry& e = at(set, victim);
            if (e.valid) ++counters_.evictions;
            e = ParticleCacheEntry{};
            e.tag = pkt.id;
            e.header_bits = pkt.header_bits;
            e.d0 = pkt.coord;
            e.last_hit_step = step_counter_;
            e.valid = true;
            ++counters_.allocs;
            return pkt;
        }
        case RecordKind::PositionBypass: {
            const auto pkt = PositionPacket::from_payload(rec.header_bits, decode_quad(rec.payload));
            const int set = set_of(pkt.id);
            if (find_way(set, pkt.id) >= 0 || choose_victim(set) >= 0)
                throw ProtocolError("bypass record where allocation was possible for particle " +
                                    std::to_string(pkt.id) + " (cache desynchronization)");
            ++counters_.bypasses;
            return pkt;
        }
        default:
            throw ProtocolError("record kind " + std::to_string(static_cast<unsigned>(rec.kind)) +
                                " is not a position record");
    }
}

}  // namespace flitsim
