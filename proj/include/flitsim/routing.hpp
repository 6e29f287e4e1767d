#pragma once

#include <array>
#include <cstdint>

#include "flitsim/packet.hpp"
#include "flitsim/rng.hpp"

namespace flitsim {

// Torus directions. Paired so that opposite(d) = d ^ 1.
enum class Dir : std::uint8_t { XPlus = 0, XMinus = 1, YPlus = 2, YMinus = 3, ZPlus = 4, ZMinus = 5 };
inline constexpr int kNumDirs = 6;

inline Dir opposite(Dir d) { return static_cast<Dir>(static_cast<int>(d) ^ 1); }
inline int dim_of(Dir d) { return static_cast<int>(d) >> 1; }
inline bool is_positive(Dir d) { return (static_cast<int>(d) & 1) == 0; }
inline Dir dir_of(int dim, bool positive) {
    return static_cast<Dir>((dim << 1) | (positive ? 0 : 1));
}

// The six dimension orders, indexed 0..5. Index 0 is XYZ, the mandatory order
// for response packets.
inline constexpr std::array<std::array<std::uint8_t, 3>, 6> kDimOrders{{
    {0, 1, 2},  // XYZ
    {0, 2, 1},  // XZY
    {1, 0, 2},  // YXZ
    {1, 2, 0},  // YZX
    {2, 0, 1},  // ZXY
    {2, 1, 0},  // ZYX
}};
inline constexpr std::uint8_t kOrderXyz = 0;

// Requests draw uniformly from the six orders; responses are always XYZ.
std::uint8_t select_dimension_order(TrafficClass tclass, Rng& rng);

// Request VC from (dateline crossed, load-balance bit); responses use VC 4.
inline constexpr std::uint8_t kResponseVc = 4;
inline constexpr int kNumRequestVcs = 4;
inline constexpr int kNumEdgeVcs = 5;

std::uint8_t vc_assign(TrafficClass tclass, bool dateline, std::uint8_t balance_bit);

struct TorusShape {
    int dims[3] = {1, 1, 1};
    int size() const { return dims[0] * dims[1] * dims[2]; }
    int diameter() const { return dims[0] / 2 + dims[1] / 2 + dims[2] / 2; }
};

// Minimal torus hop count.
int torus_distance(const TorusShape& s, const NodeCoord& a, const NodeCoord& b);
// Hop count when wrap links are forbidden (the response-class route).
int mesh_distance(const NodeCoord& a, const NodeCoord& b);

// Next travel direction for a packet at `cur` heading to `dest` under the given
// dimension order. Requests take minimal torus steps with `tie_signs` breaking
// exact half-ring ties (bit per dimension); responses never use wrap links.
// Returns false when cur == dest.
bool next_direction(const TorusShape& s, const NodeCoord& cur, const NodeCoord& dest,
                    std::uint8_t order, TrafficClass tclass, std::uint8_t tie_signs, Dir* out);

int coord_of(const NodeCoord& n, int dim);
NodeCoord neighbor(const TorusShape& s, const NodeCoord& n, Dir d);

}  // namespace flitsim
