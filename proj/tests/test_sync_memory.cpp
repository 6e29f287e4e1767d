#include "doctest.h"

#include <algorithm>
#include <vector>

#include "flitsim/rng.hpp"
#include "flitsim/sync_memory.hpp"

using namespace flitsim;

namespace {
Quad quad(std::int32_t a, std::int32_t b = 0, std::int32_t c = 0, std::int32_t d = 0) {
    Quad q;
    q.w = {a, b, c, d};
    return q;
}
}  // namespace

TEST_CASE("counted write bumps the counter and replaces or accumulates data") {
    SyncMemory m(64);
    m.counted_write(3, quad(5), WriteMode::Overwrite);
    CHECK(m.cell(3).counter == 1);
    CHECK(m.cell(3).data == quad(5));

    // Lane-wise accumulate: [1,2,3,0] + [10,0,0,0] + [0,0,0,4] = [11,2,3,4].
    SyncMemory acc(64);
    acc.counted_write(0, quad(1, 2, 3, 0), WriteMode::Accumulate);
    acc.counted_write(0, quad(10, 0, 0, 0), WriteMode::Accumulate);
    acc.counted_write(0, quad(0, 0, 0, 4), WriteMode::Accumulate);
    CHECK(acc.cell(0).data == quad(11, 2, 3, 4));
    CHECK(acc.cell(0).counter == 3);
}

TEST_CASE("counter wraps mod 256") {
    SyncMemory m(4);
    for (int i = 0; i < 256; ++i) m.counted_write(1, quad(i), WriteMode::Overwrite);
    CHECK(m.cell(1).counter == 0);
}

TEST_CASE("accumulate order-independence of the final value") {
    Rng rng(0x5eed0030);
    std::vector<Quad> writes;
    for (int i = 0; i < 32; ++i)
        writes.push_back(quad(static_cast<std::int32_t>(rng.next()), rng.range(-9, 9),
                              static_cast<std::int32_t>(rng.next()), 1));
    SyncMemory a(8), b(8);
    for (const auto& q : writes) a.counted_write(0, q, WriteMode::Accumulate);
    std::reverse(writes.begin(), writes.end());
    for (const auto& q : writes) b.counted_write(0, q, WriteMode::Accumulate);
    CHECK(a.cell(0).data == b.cell(0).data);
}

TEST_CASE("blocking read: immediate at threshold 0, released by the satisfying write") {
    SyncMemory m(16);
    CHECK(m.blocking_read(2, 0, 1, 0).has_value());

    // Threshold 1 on counter 0: stalls, then the write releases it with the data.
    CHECK_FALSE(m.blocking_read(2, 1, 42, 10).has_value());
    CHECK(m.blocked().size() == 1);
    const auto rel = m.counted_write(2, quad(7), WriteMode::Overwrite);
    REQUIRE(rel.size() == 1);
    CHECK(rel[0].reader.reader == 42);
    CHECK(rel[0].data == quad(7));
    CHECK(m.blocked().empty());
}

TEST_CASE("integrator pattern: threshold N returns the fully accumulated sum") {
    SyncMemory m(16);
    const int n = 9;
    CHECK_FALSE(m.blocking_read(5, n, 1, 0).has_value());
    std::vector<SyncMemory::Release> rel;
    for (int i = 0; i < n; ++i) {
        CHECK(rel.empty());
        rel = m.counted_write(5, quad(1, 2, 3, 4), WriteMode::Accumulate);
    }
    REQUIRE(rel.size() == 1);
    CHECK(rel[0].data == quad(n, 2 * n, 3 * n, 4 * n));
}

TEST_CASE("release happens exactly at the write that reaches the threshold") {
    Rng rng(0x5eed0031);
    for (int trial = 0; trial < 500; ++trial) {
        SyncMemory m(4);
        const std::uint8_t threshold = static_cast<std::uint8_t>(1 + rng.below(40));
        CHECK_FALSE(m.blocking_read(0, threshold, 7, 0).has_value());
        int writes = 0;
        bool released = false;
        while (writes < 60) {
            const auto rel = m.counted_write(0, quad(writes), WriteMode::Overwrite);
            ++writes;
            if (!rel.empty()) {
                released = true;
                // Exactly the threshold-th write, no earlier, no later.
                CHECK(writes == threshold);
                CHECK(rel[0].data == quad(writes - 1));
                break;
            }
        }
        CHECK(released);
    }
}

TEST_CASE("reset_region re-arms cells and refuses while a reader is blocked") {
    SyncMemory m(32);
    for (int i = 0; i < 256; ++i) m.counted_write(9, quad(i), WriteMode::Overwrite);
    m.counted_write(9, quad(1), WriteMode::Overwrite);
    CHECK(m.cell(9).counter == 1);
    m.reset_region(0, 31);
    CHECK(m.cell(9).counter == 0);
    CHECK(m.blocking_read(9, 0, 1, 0).value() == Quad{});

    CHECK_FALSE(m.blocking_read(4, 3, 2, 0).has_value());
    CHECK_THROWS_AS(m.reset_region(0, 31), ProtocolError);
    m.reset_region(5, 31);  // range not covering the blocked reader is fine
}

TEST_CASE("address range faults") {
    SyncMemory m(8);
    CHECK_THROWS_AS(m.counted_write(8, quad(0), WriteMode::Overwrite), ProtocolError);
    CHECK_THROWS_AS(m.blocking_read(100, 0, 0, 0), ProtocolError);
}

TEST_CASE("outstanding blocked reads per memory are limited") {
    SyncMemory m(8, 1);
    CHECK_FALSE(m.blocking_read(0, 5, 1, 0).has_value());
    CHECK_THROWS_AS(m.blocking_read(1, 5, 2, 0), ProtocolError);
}
