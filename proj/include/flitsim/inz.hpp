#pragma once

#include <array>
#include <cstdint>

#include "flitsim/common.hpp"
#include "flitsim/packet.hpp"

namespace flitsim {

// Interleaved non-zero encoding of a 16-byte quad payload.
//
// Encoding: every word is sign-folded (sign bit to bit 0, remaining bits
// conditionally inverted), words 0..k are bit-interleaved where k is the index
// of the most significant non-zero word, and the 2-bit k is placed in the two
// least significant bits with the interleaved data shifted up by 2. The byte
// count after stripping most significant zero bytes travels out of band.
// A result that would need 16 or more bytes is abandoned and the raw
// little-endian payload is sent with nbytes == 16.
struct EncodedPayload {
    std::uint8_t nbytes = 0;            // 0..16 valid bytes
    std::array<std::uint8_t, 16> bytes{};
    bool abandoned = false;             // true iff nbytes == 16 (raw payload)

    bool operator==(const EncodedPayload&) const = default;
};

// Sign fold: bit 0 becomes the sign, bits 31..1 are the low 31 bits XORed with
// the replicated sign. Bijective; zero is a fixed point.
std::uint32_t invert_word(std::int32_t w);
std::int32_t uninvert_word(std::uint32_t v);

EncodedPayload encode_quad(const Quad& q);

// Inverse of encode_quad. Throws DecodeError on nbytes > 16.
Quad decode_quad(const EncodedPayload& e);

// Identity path used when compression is disabled: raw 16-byte payload.
EncodedPayload encode_quad_raw(const Quad& q);

}  // namespace flitsim
