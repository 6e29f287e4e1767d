#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "flitsim/machine.hpp"

namespace flitsim {

// Fence flood bookkeeping.
//
// A fence instance floods every path class data could take. Merging state is a
// counter per table entry; an entry is addressed by where a fence packet is
// consumed: (component kind, node-local component, input port, VC, plane).
// Planes keep logically distinct waves separate where pooling them would either
// deadlock (cross-node level pooling on rings) or gate unrelated traffic:
//   plane 0                  the node's own sources flooding outward
//   plane 1+c                termination wave from ingress channel c (pools
//                            all VCs and budget levels on its way to the RA)
//   plane 20+b               transit wave still holding budget b; kept per
//                            level so the flood depth matches the hop budget
//   plane kEndpointPlane     per-endpoint pool: exactly one delivery each
namespace fence_key {

enum class EComp : std::uint8_t {
    Core = 0,
    Edge = 1,
    Ra = 2,
    CaIngress = 3,
    CaEgress = 4,
    EndGc = 5,
    EndIcb = 6,
};

inline constexpr std::uint16_t kPlaneSource = 0;
inline constexpr std::uint16_t kPlaneDeliverBase = 1;   // +ingress ca local idx
inline constexpr std::uint16_t kPlaneTransitBase = 20;  // +remaining budget
inline constexpr std::uint16_t kEndpointPlane = 500;

inline std::uint64_t pack(EComp kind, std::uint32_t comp_local, std::uint8_t port, std::uint8_t vc,
                          std::uint16_t plane) {
    return (static_cast<std::uint64_t>(kind) << 56) | (static_cast<std::uint64_t>(comp_local) << 32) |
           (static_cast<std::uint64_t>(port) << 24) | (static_cast<std::uint64_t>(vc) << 16) | plane;
}

}  // namespace fence_key

struct FenceEmission {
    enum class Action : std::uint8_t {
        Port = 0,      // enqueue a fence packet on an output port of the firing router
        EndpointGc,    // count toward a GC's pooled delivery entry
        EndpointIcb,   // count toward an ICB's pooled delivery entry
        Wire,          // pack a fence record onto this channel adapter's wire
        IngressInject  // enqueue into this channel adapter's ingress staging
    };
    Action action = Action::Port;
    std::uint8_t out_port = 0;
    std::uint8_t vc = 0;
    std::uint8_t level = 0;    // hop budget carried by the emitted fence
    std::uint16_t plane = 0;   // plane of the emitted fence
    std::uint32_t target = 0;  // endpoint local index for Endpoint* actions
};

struct FenceTableEntry {
    std::uint64_t key = 0;
    std::uint32_t expected = 0;
    std::uint32_t emission_begin = 0;
    std::uint32_t emission_count = 0;
};

struct FenceTable {
    FencePattern pattern = FencePattern::GcToGc;
    int hops = 0;
    std::vector<FenceTableEntry> entries;
    std::vector<FenceEmission> emissions;
    std::unordered_map<std::uint64_t, std::uint32_t> index;  // key -> entry idx

    const FenceTableEntry* find(std::uint64_t key) const {
        const auto it = index.find(key);
        return it == index.end() ? nullptr : &entries[it->second];
    }
};

// Builds the per-(pattern, hop budget) tables by walking every node-local data
// path class with the same stepping rules the routers use, then taking union
// in-degrees as expected counts and union out-edges as output masks. The table
// is identical for every node (the torus is vertex transitive), so one copy is
// shared machine-wide.
struct FenceTableBuilder {
    const Machine& m;
    FencePattern pattern;
    int hops;

    std::unique_ptr<FenceTable> build();
};

}  // namespace flitsim
