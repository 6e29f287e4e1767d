#include "flitsim/sync_memory.hpp"

#include <algorithm>
#include <string>

namespace flitsim {

void SyncMemory::check_addr(std::uint32_t addr) const {
    if (addr >= quads_)
        throw ProtocolError("quad address " + std::to_string(addr) + " out of range (size " +
                            std::to_string(quads_) + ")");
}

std::vector<SyncMemory::Release> SyncMemory::counted_write(std::uint32_t addr, const Quad& q,
                                                           WriteMode mode) {
    check_addr(addr);
    QuadCell& c = cells_[addr];  // zero-initialized on first touch
    if (mode == WriteMode::Overwrite)
        c.data = q;
    else
        c.data = c.data.wrapping_add(q);
    c.counter = static_cast<std::uint8_t>(c.counter + 1);

    std::vector<Release> released;
    for (auto it = blocked_.begin(); it != blocked_.end();) {
        if (it->addr == addr && c.counter >= it->threshold) {
            released.push_back(Release{*it, c.data});
            it = blocked_.erase(it);
        } else {
            ++it;
        }
    }
    return released;
}

std::optional<Quad> SyncMemory::blocking_read(std::uint32_t addr, std::uint8_t threshold,
                                              std::uint64_t reader, SimTime now) {
    check_addr(addr);
    const auto it = cells_.find(addr);
    const QuadCell c = it == cells_.end() ? QuadCell{} : it->second;
    if (c.counter >= threshold) return c.data;
    if (static_cast<int>(blocked_.size()) >= max_blocked_)
        throw ProtocolError("too many outstanding blocking reads (limit " +
                            std::to_string(max_blocked_) + ")");
    blocked_.push_back(BlockedReader{addr, threshold, reader, now});
    return std::nullopt;
}

void SyncMemory::reset_region(std::uint32_t lo, std::uint32_t hi) {
    check_addr(lo);
    check_addr(hi);
    for (const auto& b : blocked_) {
        if (b.addr >= lo && b.addr <= hi)
            throw ProtocolError("reset_region [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "] would orphan a blocked reader at address " + std::to_string(b.addr) +
                                " (threshold " + std::to_string(b.threshold) + ")");
    }
    for (auto it = cells_.begin(); it != cells_.end();) {
        if (it->first >= lo && it->first <= hi)
            it = cells_.erase(it);
        else
            ++it;
    }
}

QuadCell SyncMemory::cell(std::uint32_t addr) const {
    const auto it = cells_.find(addr);
    return it == cells_.end() ? QuadCell{} : it->second;
}

}  // namespace flitsim
