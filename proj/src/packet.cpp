#include "flitsim/packet.hpp"

namespace flitsim {

namespace {

constexpr std::uint64_t kReservedMask = 0x1Full << 59;

void put(std::uint64_t& w, unsigned shift, unsigned bits, std::uint64_t value) {
    w |= (value & ((1ull << bits) - 1)) << shift;
}

std::uint64_t get(std::uint64_t w, unsigned shift, unsigned bits) {
    return (w >> shift) & ((1ull << bits) - 1);
}

void require(bool ok, const char* field) {
    if (!ok) throw EncodeError(std::string("header field out of range: ") + field);
}

}  // namespace

void check_header_ranges(const PacketHeader& h, const MachineShape& shape) {
    require(static_cast<unsigned>(h.ptype) < kNumPacketTypes, "ptype");
    require(h.vc < 8, "vc");
    require(h.dest_node.x < shape.dim_x, "dest_node.x");
    require(h.dest_node.y < shape.dim_y, "dest_node.y");
    require(h.dest_node.z < shape.dim_z, "dest_node.z");
    require(h.dest_tile.u < shape.core_u, "dest_tile.u");
    require(h.dest_tile.v < shape.core_v, "dest_tile.v");
    require(static_cast<unsigned>(h.dest_tile.endpoint) < kNumEndpoints, "dest_tile.endpoint");
    require(h.hop_budget < 32, "hop_budget");
    require(h.fence_id < 14, "fence_id");
    if (h.ptype == PacketType::Fence)
        require(h.tclass == TrafficClass::Request, "tclass (fences are request class)");
}

std::uint64_t encode_header(const PacketHeader& h, const MachineShape& shape) {
    check_header_ranges(h, shape);
    std::uint64_t w = 0;
    put(w, 0, 3, static_cast<std::uint64_t>(h.ptype));
    put(w, 3, 1, static_cast<std::uint64_t>(h.tclass));
    put(w, 4, 3, h.vc);
    put(w, 7, 5, h.dest_node.x);
    put(w, 12, 5, h.dest_node.y);
    put(w, 17, 5, h.dest_node.z);
    put(w, 22, 5, h.dest_tile.u);
    put(w, 27, 4, h.dest_tile.v);
    put(w, 31, 3, static_cast<std::uint64_t>(h.dest_tile.endpoint));
    put(w, 34, 5, h.hop_budget);
    put(w, 39, 4, h.fence_id);
    put(w, 43, 16, h.seq);
    return w;
}

PacketHeader decode_header(std::uint64_t w, const MachineShape& shape) {
    if (w & kReservedMask) throw DecodeError("header reserved bits set");
    PacketHeader h;
    const auto ptype = get(w, 0, 3);
    if (ptype >= kNumPacketTypes) throw DecodeError("undefined ptype code " + std::to_string(ptype));
    h.ptype = static_cast<PacketType>(ptype);
    h.tclass = static_cast<TrafficClass>(get(w, 3, 1));
    h.vc = static_cast<std::uint8_t>(get(w, 4, 3));
    h.dest_node.x = static_cast<std::uint8_t>(get(w, 7, 5));
    h.dest_node.y = static_cast<std::uint8_t>(get(w, 12, 5));
    h.dest_node.z = static_cast<std::uint8_t>(get(w, 17, 5));
    h.dest_tile.u = static_cast<std::uint8_t>(get(w, 22, 5));
    h.dest_tile.v = static_cast<std::uint8_t>(get(w, 27, 4));
    const auto ep = get(w, 31, 3);
    if (ep >= kNumEndpoints) throw DecodeError("undefined endpoint code " + std::to_string(ep));
    h.dest_tile.endpoint = static_cast<Endpoint>(ep);
    h.hop_budget = static_cast<std::uint8_t>(get(w, 34, 5));
    h.fence_id = static_cast<std::uint8_t>(get(w, 39, 4));
    h.seq = static_cast<std::uint16_t>(get(w, 43, 16));
    try {
        check_header_ranges(h, shape);
    } catch (const EncodeError& e) {
        throw DecodeError(e.what());
    }
    return h;
}

std::string to_string(PacketType t) {
    switch (t) {
        case PacketType::RequestWrite: return "RequestWrite";
        case PacketType::Response: return "Response";
        case PacketType::Fence: return "Fence";
        case PacketType::Position: return "Position";
        case PacketType::CompressedPosition: return "CompressedPosition";
        case PacketType::Force: return "Force";
        case PacketType::Control: return "Control";
    }
    return "?";
}

}  // namespace flitsim
