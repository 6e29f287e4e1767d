#include "flitsim/inz.hpp"

#include <string>

namespace flitsim {

std::uint32_t invert_word(std::int32_t w) {
    const std::uint32_t u = static_cast<std::uint32_t>(w);
    const std::uint32_t sign = u >> 31;
    const std::uint32_t rest = (u & 0x7fffffffu) ^ (sign ? 0x7fffffffu : 0u);
    return (rest << 1) | sign;
}

std::int32_t uninvert_word(std::uint32_t v) {
    const std::uint32_t sign = v & 1u;
    std::uint32_t rest = v >> 1;
    if (sign) rest ^= 0x7fffffffu;
    return static_cast<std::int32_t>((sign << 31) | rest);
}

EncodedPayload encode_quad_raw(const Quad& q) {
    EncodedPayload e;
    e.nbytes = 16;
    e.abandoned = true;
    for (int i = 0; i < 4; ++i) {
        const std::uint32_t u = static_cast<std::uint32_t>(q.w[i]);
        e.bytes[static_cast<std::size_t>(i) * 4 + 0] = static_cast<std::uint8_t>(u);
        e.bytes[static_cast<std::size_t>(i) * 4 + 1] = static_cast<std::uint8_t>(u >> 8);
        e.bytes[static_cast<std::size_t>(i) * 4 + 2] = static_cast<std::uint8_t>(u >> 16);
        e.bytes[static_cast<std::size_t>(i) * 4 + 3] = static_cast<std::uint8_t>(u >> 24);
    }
    return e;
}

namespace {

Quad decode_raw(const EncodedPayload& e) {
    Quad q;
    for (int i = 0; i < 4; ++i) {
        std::uint32_t u = 0;
        for (int b = 3; b >= 0; --b)
            u = (u << 8) | e.bytes[static_cast<std::size_t>(i) * 4 + static_cast<std::size_t>(b)];
        q.w[i] = static_cast<std::int32_t>(u);
    }
    return q;
}

}  // namespace

EncodedPayload encode_quad(const Quad& q) {
    std::uint32_t inv[4];
    int k = -1;
    for (int i = 0; i < 4; ++i) {
        inv[i] = invert_word(q.w[i]);
        if (inv[i] != 0) k = i;
    }
    if (k < 0) return EncodedPayload{};  // all-zero quad: zero bytes

    // Interleave bit i of word j into vector bit 2 + i*(k+1) + j. The vector is
    // at most 2 + 32*(k+1) = 130 bits, so three 64-bit limbs suffice.
    std::uint64_t vec[3] = {static_cast<std::uint64_t>(k), 0, 0};
    for (int j = 0; j <= k; ++j) {
        std::uint32_t w = inv[j];
        while (w != 0) {
            const int i = __builtin_ctz(w);
            w &= w - 1;
            const int pos = 2 + i * (k + 1) + j;
            vec[pos >> 6] |= 1ull << (pos & 63);
        }
    }

    int top_bit = -1;
    for (int limb = 2; limb >= 0; --limb) {
        if (vec[limb] != 0) {
            top_bit = limb * 64 + 63 - __builtin_clzll(vec[limb]);
            break;
        }
    }
    const int nbytes = top_bit / 8 + 1;
    if (nbytes >= 16) return encode_quad_raw(q);  // abandon: raw is never worse

    EncodedPayload e;
    e.nbytes = static_cast<std::uint8_t>(nbytes);
    for (int b = 0; b < nbytes; ++b)
        e.bytes[static_cast<std::size_t>(b)] =
            static_cast<std::uint8_t>(vec[b >> 3] >> ((b & 7) * 8));
    return e;
}

Quad decode_quad(const EncodedPayload& e) {
    if (e.nbytes > 16) throw DecodeError("encoded payload length " + std::to_string(e.nbytes) + " > 16");
    if (e.nbytes == 0) return Quad{};
    if (e.nbytes == 16) return decode_raw(e);

    std::uint64_t vec[2] = {0, 0};
    for (int b = 0; b < e.nbytes; ++b)
        vec[b >> 3] |= static_cast<std::uint64_t>(e.bytes[static_cast<std::size_t>(b)]) << ((b & 7) * 8);

    const int k = static_cast<int>(vec[0] & 3u);
    std::uint32_t inv[4] = {0, 0, 0, 0};
    for (int i = 0; i < 32; ++i) {
        for (int j = 0; j <= k; ++j) {
            const int pos = 2 + i * (k + 1) + j;
            if (pos > 127) break;
            if ((vec[pos >> 6] >> (pos & 63)) & 1u) inv[j] |= 1u << i;
        }
    }
    Quad q;
    for (int j = 0; j < 4; ++j) q.w[j] = uninvert_word(inv[j]);
    return q;
}

}  // namespace flitsim
