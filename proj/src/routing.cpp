#include "flitsim/routing.hpp"

namespace flitsim {

std::uint8_t select_dimension_order(TrafficClass tclass, Rng& rng) {
    if (tclass == TrafficClass::Response) return kOrderXyz;
    return static_cast<std::uint8_t>(rng.below(6));
}

std::uint8_t vc_assign(TrafficClass tclass, bool dateline, std::uint8_t balance_bit) {
    if (tclass == TrafficClass::Response) return kResponseVc;
    return static_cast<std::uint8_t>(2 * (dateline ? 1 : 0) + (balance_bit & 1));
}

int coord_of(const NodeCoord& n, int dim) {
    switch (dim) {
        case 0: return n.x;
        case 1: return n.y;
        default: return n.z;
    }
}

NodeCoord neighbor(const TorusShape& s, const NodeCoord& n, Dir d) {
    NodeCoord r = n;
    const int dim = dim_of(d);
    const int size = s.dims[dim];
    const int cur = coord_of(n, dim);
    const int nxt = is_positive(d) ? (cur + 1) % size : (cur + size - 1) % size;
    switch (dim) {
        case 0: r.x = static_cast<std::uint8_t>(nxt); break;
        case 1: r.y = static_cast<std::uint8_t>(nxt); break;
        default: r.z = static_cast<std::uint8_t>(nxt); break;
    }
    return r;
}

int torus_distance(const TorusShape& s, const NodeCoord& a, const NodeCoord& b) {
    int total = 0;
    for (int dim = 0; dim < 3; ++dim) {
        const int size = s.dims[dim];
        const int fwd = ((coord_of(b, dim) - coord_of(a, dim)) % size + size) % size;
        total += fwd < size - fwd ? fwd : size - fwd;
    }
    return total;
}

int mesh_distance(const NodeCoord& a, const NodeCoord& b) {
    int total = 0;
    for (int dim = 0; dim < 3; ++dim) {
        const int d = coord_of(a, dim) - coord_of(b, dim);
        total += d < 0 ? -d : d;
    }
    return total;
}

bool next_direction(const TorusShape& s, const NodeCoord& cur, const NodeCoord& dest,
                    std::uint8_t order, TrafficClass tclass, std::uint8_t tie_signs, Dir* out) {
    for (const std::uint8_t dim : kDimOrders[order]) {
        const int size = s.dims[dim];
        const int c = coord_of(cur, dim);
        const int d = coord_of(dest, dim);
        if (c == d) continue;
        bool positive;
        if (tclass == TrafficClass::Response) {
            positive = d > c;  // mesh route: no wrap links
        } else {
            const int fwd = ((d - c) % size + size) % size;
            const int bwd = size - fwd;
            if (fwd < bwd)
                positive = true;
            else if (fwd > bwd)
                positive = false;
            else
                positive = ((tie_signs >> dim) & 1) != 0;
        }
        *out = dir_of(dim, positive);
        return true;
    }
    return false;
}

}  // namespace flitsim
