#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "flitsim/common.hpp"

namespace flitsim {

enum class PacketType : std::uint8_t {
    RequestWrite = 0,
    Response = 1,
    Fence = 2,
    Position = 3,
    CompressedPosition = 4,
    Force = 5,
    Control = 6,
};
inline constexpr int kNumPacketTypes = 7;

enum class TrafficClass : std::uint8_t { Request = 0, Response = 1 };

enum class Endpoint : std::uint8_t { Gc0 = 0, Gc1 = 1, Bc = 2, Icb = 3, RowAdapter = 4 };
inline constexpr int kNumEndpoints = 5;

// Torus node coordinates; each must be < the configured extent of its dimension.
struct NodeCoord {
    std::uint8_t x = 0, y = 0, z = 0;
    bool operator==(const NodeCoord&) const = default;
};

// On-chip tile coordinates plus local endpoint selector.
struct TileCoord {
    std::uint8_t u = 0;  // column
    std::uint8_t v = 0;  // row
    Endpoint endpoint = Endpoint::Gc0;
    bool operator==(const TileCoord&) const = default;
};

struct PacketHeader {
    PacketType ptype = PacketType::RequestWrite;
    TrafficClass tclass = TrafficClass::Request;
    NodeCoord dest_node;
    TileCoord dest_tile;
    std::uint8_t vc = 0;          // 3 bits
    std::uint8_t hop_budget = 0;  // 5 bits; fences only
    std::uint8_t fence_id = 0;    // 4 bits; fences only
    std::uint16_t seq = 0;        // debugging sequence number
    bool operator==(const PacketHeader&) const = default;
};

// Four 32-bit words; the SRAM synchronization granule and the flit payload unit.
struct Quad {
    std::array<std::int32_t, 4> w{0, 0, 0, 0};
    bool operator==(const Quad&) const = default;

    bool is_zero() const { return w[0] == 0 && w[1] == 0 && w[2] == 0 && w[3] == 0; }
    Quad wrapping_add(const Quad& o) const {
        Quad r;
        for (int i = 0; i < 4; ++i) r.w[i] = wrap_add_i32(w[i], o.w[i]);
        return r;
    }
};

// 192-bit transport unit: 64-bit header + 128-bit payload. Two-flit packets
// repeat the header with the continuation marker set.
struct Flit {
    PacketHeader header;
    Quad payload;
    bool continuation = false;
    bool operator==(const Flit&) const = default;
};

// Machine extents a header is validated against.
struct MachineShape {
    std::uint8_t dim_x = 1, dim_y = 1, dim_z = 1;
    std::uint8_t core_u = 24, core_v = 12;
};

// 64-bit header layout (LSB first):
//   [0:2]   ptype        [3]    tclass      [4:6]   vc
//   [7:11]  dest x       [12:16] dest y     [17:21] dest z
//   [22:26] dest u       [27:30] dest v     [31:33] endpoint
//   [34:38] hop_budget   [39:42] fence_id   [43:58] seq
//   [59:63] reserved, must be zero
// This layout is the wire contract used by frame files and golden traces.
std::uint64_t encode_header(const PacketHeader& h, const MachineShape& shape);
PacketHeader decode_header(std::uint64_t w, const MachineShape& shape);

// Field ranges against shape; throws EncodeError naming the offending field.
void check_header_ranges(const PacketHeader& h, const MachineShape& shape);

std::string to_string(PacketType t);

}  // namespace flitsim
