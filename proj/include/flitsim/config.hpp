#pragma once

#include <cstdint>
#include <string>

#include "flitsim/common.hpp"

namespace flitsim {

// All latencies are cycles at the configured clock; reporting converts to ns.
// The per-component defaults are calibrated so that a best-placed one-hop
// ping-pong lands at 55 ns and the averaged hop sweep fits the documented
// 55.9 + 34.2*hops line at 2.8 GHz.
struct SimConfig {
    // Topology.
    int dim_x = 2, dim_y = 2, dim_z = 2;  // torus extents
    int core_u = 24, core_v = 12;         // on-chip tile grid

    double clock_ghz = 2.8;

    // Latency budget (cycles).
    std::uint32_t sender_overhead = 27;    // store issue to first flit at the router
    std::uint32_t receiver_overhead = 27;  // last flit to blocking-read release
    std::uint32_t core_hop_u = 2;
    std::uint32_t core_hop_v = 5;
    std::uint32_t edge_hop = 3;
    std::uint32_t row_adapter = 3;
    std::uint32_t ca_egress = 10;  // adapter pipeline, each direction
    std::uint32_t ca_ingress = 10;
    std::uint32_t wire = 58;       // serdes + flight per channel crossing

    // Channel bandwidth per slice as a rational bytes/cycle. The default is
    // 8 lanes x 29 Gb/s against a 2.8 GHz core clock: 29/2.8 = 145/14 B/cycle.
    std::uint32_t channel_bytes_num = 145;
    std::uint32_t channel_bytes_den = 14;
    std::uint32_t frame_bytes = 64;

    // Queueing (flits).
    std::uint32_t router_queue_flits = 8;
    std::uint32_t ca_staging_flits = 32;

    // Compression.
    bool inz_enabled = true;
    bool pcache_enabled = true;
    std::uint32_t pcache_threshold = 4;

    // Fences.
    std::uint32_t fence_issue = 10;        // instruction to packet at the router
    std::uint32_t fence_deliver = 14;      // delivery to counted-write visible
    std::uint32_t fence_adapter = 23;      // extra adapter work per channel crossing side
    std::uint32_t max_fences_in_flight = 14;
    std::uint32_t edge_fence_window = 4;   // concurrent fences admitted per edge network

    // Memory.
    std::uint32_t sram_quads = 8192;  // 128 KB of 16-byte quads
    int max_blocked_reads = 1;

    std::uint64_t seed = 1;
    std::uint64_t watchdog_cycles = 200'000'000;

    // Stats.
    std::uint32_t activity_bucket_cycles = 256;
    bool trace_fences = false;

    double ns_per_cycle() const { return 1.0 / clock_ghz; }

    void validate() const;  // throws ConfigError naming the field

    static SimConfig from_json_file(const std::string& path);
    static SimConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
};

}  // namespace flitsim
