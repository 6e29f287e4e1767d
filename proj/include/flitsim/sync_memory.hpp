#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "flitsim/common.hpp"
#include "flitsim/packet.hpp"

namespace flitsim {

enum class WriteMode : std::uint8_t { Overwrite = 0, Accumulate = 1 };

// One synchronization granule: a quad of data plus its 8-bit arrival counter.
struct QuadCell {
    Quad data;
    std::uint8_t counter = 0;
    bool operator==(const QuadCell&) const = default;
};

struct BlockedReader {
    std::uint32_t addr = 0;       // quad address
    std::uint8_t threshold = 0;
    std::uint64_t reader = 0;     // opaque continuation token
    SimTime issue_time = 0;
};

// Globally addressable per-core SRAM with counted writes and blocking reads.
// Counter comparison is `counter >= threshold` with no modular window; software
// re-arms counters between epochs with reset_region.
class SyncMemory {
public:
    explicit SyncMemory(std::uint32_t quads = 8192, int max_blocked = 1)
        : quads_(quads), max_blocked_(max_blocked) {}

    struct Release {
        BlockedReader reader;
        Quad data;  // cell contents at release time
    };

    // Applies the write, bumps the counter (mod 256), and returns any readers
    // whose threshold is now met. Throws ProtocolError on an out of range address.
    std::vector<Release> counted_write(std::uint32_t addr, const Quad& q, WriteMode mode);

    // Returns the data immediately when counter >= threshold; otherwise records
    // the reader, to be released by a later counted_write.
    std::optional<Quad> blocking_read(std::uint32_t addr, std::uint8_t threshold,
                                      std::uint64_t reader, SimTime now);

    // Zeroes counters and data over [lo, hi]. Throws if a blocked reader waits
    // inside the range (it could never be released afterwards).
    void reset_region(std::uint32_t lo, std::uint32_t hi);

    QuadCell cell(std::uint32_t addr) const;
    const std::vector<BlockedReader>& blocked() const { return blocked_; }
    std::uint32_t size_quads() const { return quads_; }

private:
    void check_addr(std::uint32_t addr) const;

    std::uint32_t quads_;
    int max_blocked_;
    std::unordered_map<std::uint32_t, QuadCell> cells_;  // sparse; untouched cells are zero
    std::vector<BlockedReader> blocked_;
};

}  // namespace flitsim
