#include "doctest.h"

#include <vector>

#include "flitsim/inz.hpp"
#include "flitsim/rng.hpp"

using namespace flitsim;

namespace {

// Independent reference encoder, written bit-by-bit against the scheme
// description rather than sharing any code with the implementation.
struct RefEncoded {
    int nbytes = 0;
    std::vector<std::uint8_t> bytes;
    bool abandoned = false;
};

std::uint32_t ref_invert(std::uint32_t w) {
    // return {{31{w[31]}} ^ w[30:0], w[31]}
    const std::uint32_t sign = (w >> 31) & 1u;
    const std::uint32_t replicated = sign ? 0x7fffffffu : 0u;
    const std::uint32_t upper31 = replicated ^ (w & 0x7fffffffu);
    return (upper31 << 1) | sign;
}

RefEncoded ref_encode(const Quad& q) {
    std::uint32_t inv[4];
    int ms = -1;
    for (int i = 0; i < 4; ++i) {
        inv[i] = ref_invert(static_cast<std::uint32_t>(q.w[i]));
        if (inv[i] != 0) ms = i;
    }
    RefEncoded out;
    if (ms < 0) return out;

    // Build the bit vector as an explicit bool array: 2-bit most significant
    // word index at the bottom, then the interleave of words 0..ms.
    std::vector<bool> bits(2 + 32 * (ms + 1), false);
    bits[0] = (ms & 1) != 0;
    bits[1] = (ms & 2) != 0;
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j <= ms; ++j)
            bits[static_cast<std::size_t>(2 + i * (ms + 1) + j)] = ((inv[j] >> i) & 1u) != 0;

    int top = -1;
    for (int b = static_cast<int>(bits.size()) - 1; b >= 0; --b)
        if (bits[static_cast<std::size_t>(b)]) { top = b; break; }
    int nbytes = top / 8 + 1;
    if (nbytes >= 16) {
        out.abandoned = true;
        out.nbytes = 16;
        for (int i = 0; i < 4; ++i) {
            const auto u = static_cast<std::uint32_t>(q.w[i]);
            out.bytes.push_back(static_cast<std::uint8_t>(u));
            out.bytes.push_back(static_cast<std::uint8_t>(u >> 8));
            out.bytes.push_back(static_cast<std::uint8_t>(u >> 16));
            out.bytes.push_back(static_cast<std::uint8_t>(u >> 24));
        }
        return out;
    }
    out.nbytes = nbytes;
    out.bytes.assign(static_cast<std::size_t>(nbytes), 0);
    for (std::size_t b = 0; b < bits.size(); ++b)
        if (bits[b]) out.bytes[b / 8] |= static_cast<std::uint8_t>(1u << (b % 8));
    return out;
}

void check_against_ref(const Quad& q) {
    const auto got = encode_quad(q);
    const auto want = ref_encode(q);
    REQUIRE(got.nbytes == want.nbytes);
    REQUIRE(got.abandoned == want.abandoned);
    for (int i = 0; i < want.nbytes; ++i) REQUIRE(got.bytes[static_cast<std::size_t>(i)] == want.bytes[static_cast<std::size_t>(i)]);
    REQUIRE(decode_quad(got) == q);
}

Quad quad(std::int32_t a, std::int32_t b, std::int32_t c, std::int32_t d) {
    Quad q;
    q.w = {a, b, c, d};
    return q;
}

}  // namespace

TEST_CASE("invert_word matches the hardware sign-fold on frozen vectors") {
    CHECK(invert_word(0) == 0u);
    CHECK(invert_word(-1) == 0x00000001u);
    CHECK(invert_word(5) == 0x0000000Au);
    CHECK(invert_word(INT32_MIN) == 0xFFFFFFFFu);
    CHECK(invert_word(INT32_MAX) == 0xFFFFFFFEu);

    CHECK(uninvert_word(0x00000001u) == -1);
    CHECK(uninvert_word(0) == 0);
}

TEST_CASE("invert/uninvert are mutually inverse over 1e6 random words") {
    Rng rng(0x5eed0002);
    for (int i = 0; i < 1000000; ++i) {
        const auto w = static_cast<std::int32_t>(rng.next());
        CHECK(uninvert_word(invert_word(w)) == w);
        CHECK(invert_word(w) == ref_invert(static_cast<std::uint32_t>(w)));
    }
    for (std::int32_t w : {0, -1, INT32_MIN, INT32_MAX})
        CHECK(uninvert_word(invert_word(w)) == w);
}

TEST_CASE("frozen encode examples") {
    CHECK(encode_quad(quad(0, 0, 0, 0)).nbytes == 0);
    CHECK(encode_quad(quad(0, 0, 0, 0)).abandoned == false);

    // All-ones quad: each word folds to 1, the 4-way interleave is 0b1111, and
    // with the 2-bit index 0b11 below it the single byte is 0x3F.
    const auto ones = encode_quad(quad(-1, -1, -1, -1));
    CHECK(ones.nbytes == 1);
    CHECK(ones.bytes[0] == 0x3F);
    CHECK(decode_quad(ones) == quad(-1, -1, -1, -1));

    // Max-positive words overflow the 128-bit vector and abandon.
    const auto big = encode_quad(quad(INT32_MAX, INT32_MAX, INT32_MAX, INT32_MAX));
    CHECK(big.abandoned);
    CHECK(big.nbytes == 16);
    CHECK(decode_quad(big) == quad(INT32_MAX, INT32_MAX, INT32_MAX, INT32_MAX));
}

TEST_CASE("abandoned payloads pass through verbatim") {
    const Quad q = quad(INT32_MIN, 12345, -99999999, INT32_MAX);
    const auto e = encode_quad(q);
    REQUIRE(e.abandoned);
    // Raw little-endian payload bytes.
    CHECK(e.bytes[0] == 0x00);
    CHECK(e.bytes[3] == 0x80);
    CHECK(decode_quad(e) == q);
}

TEST_CASE("round-trip over 1e6 random quads incl. sign boundaries") {
    Rng rng(0x5eed0003);
    const std::int32_t specials[] = {0, 1, -1, 2, -2, INT32_MIN, INT32_MAX, 0x7FFF, -0x8000};
    for (int i = 0; i < 1000000; ++i) {
        Quad q;
        for (auto& w : q.w) {
            // Mix magnitudes so small payloads dominate but boundaries appear.
            switch (rng.below(4)) {
                case 0: w = specials[rng.below(9)]; break;
                case 1: w = rng.range(-128, 127); break;
                case 2: w = static_cast<std::int32_t>(rng.next() & 0xFFFFF) - 0x80000; break;
                default: w = static_cast<std::int32_t>(rng.next()); break;
            }
        }
        const auto e = encode_quad(q);
        REQUIRE(e.nbytes <= 16);
        REQUIRE((e.nbytes == 0) == q.is_zero());
        REQUIRE(decode_quad(e) == q);
    }
}

TEST_CASE("bit-exact match with the reference oracle, exhaustive small grid plus random") {
    for (std::int32_t a = -2; a <= 2; ++a)
        for (std::int32_t b = -2; b <= 2; ++b)
            for (std::int32_t c = -2; c <= 2; ++c)
                for (std::int32_t d = -2; d <= 2; ++d) check_against_ref(quad(a, b, c, d));

    Rng rng(0x5eed0004);
    for (int i = 0; i < 20000; ++i) {
        Quad q;
        for (auto& w : q.w) w = static_cast<std::int32_t>(rng.next() >> rng.below(33));
        check_against_ref(q);
    }
}

TEST_CASE("shrinking magnitudes never increases nbytes") {
    Rng rng(0x5eed0005);
    for (int i = 0; i < 20000; ++i) {
        Quad q;
        for (auto& w : q.w) {
            w = static_cast<std::int32_t>(rng.next() >> rng.below(28));
            if (w == 0) w = 1;  // keep the word count fixed under scaling
        }
        int prev = encode_quad(q).nbytes;
        for (int shift = 1; shift < 8; ++shift) {
            Quad s = q;
            bool ok = true;
            for (auto& w : s.w) {
                const std::int32_t mag = (w < 0 ? -w : w) >> shift;
                if (mag == 0) { ok = false; break; }
                w = w < 0 ? -mag : mag;
            }
            if (!ok) break;
            const int now = encode_quad(s).nbytes;
            CHECK(now <= prev);
            prev = now;
        }
    }
}

TEST_CASE("malformed length rejected") {
    EncodedPayload e;
    e.nbytes = 17;
    CHECK_THROWS_AS(decode_quad(e), DecodeError);
}
