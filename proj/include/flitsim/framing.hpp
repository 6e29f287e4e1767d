#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flitsim/common.hpp"
#include "flitsim/inz.hpp"

namespace flitsim {

// Byte-granular record stream cut into fixed-length channel frames. Records may
// straddle frame boundaries. Layout per record:
//
//   descriptor byte: bits [0:4] payload length 0..16, bits [5:7] record kind
//   PacketHead/PacketBody/PositionAllocate/PositionBypass:
//       descriptor, 8-byte header (little endian), payload bytes
//   CompressedPosition:
//       descriptor, 2-byte cache index (little endian, 10 bits used), payload
//   FramePad:
//       descriptor only; the remainder of the current frame is padding
enum class RecordKind : std::uint8_t {
    PacketHead = 0,
    PacketBody = 1,
    CompressedPosition = 2,
    PositionAllocate = 3,
    PositionBypass = 4,
    FramePad = 7,
};

struct WireRecord {
    RecordKind kind = RecordKind::PacketHead;
    std::uint64_t header_bits = 0;   // absent on CompressedPosition
    std::uint16_t cache_index = 0;   // CompressedPosition only
    EncodedPayload payload;

    bool operator==(const WireRecord&) const = default;

    std::size_t wire_bytes() const {
        const std::size_t fixed = kind == RecordKind::CompressedPosition ? 3 : 9;
        return fixed + payload.nbytes;
    }
};

struct ChannelFrame {
    std::vector<std::uint8_t> bytes;  // always exactly the configured frame length
    bool operator==(const ChannelFrame&) const = default;
};

inline constexpr std::size_t kDefaultFrameBytes = 64;

// Accumulates records into a byte stream and cuts complete frames.
class RecordPacker {
public:
    explicit RecordPacker(std::size_t frame_bytes = kDefaultFrameBytes);

    void push(const WireRecord& r);

    // Pads the open frame (if any) with a FramePad record and zero fill so the
    // stream ends on a frame boundary.
    void flush();

    // Complete frames accumulated so far; caller takes ownership.
    std::vector<ChannelFrame> take_frames();

    std::size_t pending_bytes() const { return pending_.size(); }
    std::uint64_t total_payload_bytes() const { return total_payload_bytes_; }
    std::uint64_t total_pad_bytes() const { return total_pad_bytes_; }

private:
    void append(const std::uint8_t* data, std::size_t n);

    std::size_t frame_bytes_;
    std::vector<std::uint8_t> pending_;
    std::vector<ChannelFrame> frames_;
    std::uint64_t total_payload_bytes_ = 0;
    std::uint64_t total_pad_bytes_ = 0;
};

// Streaming inverse of RecordPacker.
class RecordUnpacker {
public:
    explicit RecordUnpacker(std::size_t frame_bytes = kDefaultFrameBytes);

    void feed(const ChannelFrame& f);

    // Next complete record, skipping padding; nullopt when more bytes are needed.
    std::optional<WireRecord> next();

    // Declares the stream complete. Throws DecodeError identifying the byte
    // offset if a record is cut off mid-stream.
    void finish();

private:
    std::size_t frame_bytes_;
    std::vector<std::uint8_t> buf_;
    std::size_t pos_ = 0;          // parse position within buf_
    std::uint64_t consumed_ = 0;   // absolute stream offset of buf_[0]
};

// One-shot helpers over the streaming classes.
std::vector<ChannelFrame> pack_records(const std::vector<WireRecord>& records,
                                       std::size_t frame_bytes = kDefaultFrameBytes);
std::vector<WireRecord> unpack_records(const std::vector<ChannelFrame>& frames,
                                       std::size_t frame_bytes = kDefaultFrameBytes);

// Frame dump file: magic "INZF", version byte 1, frame length (2 bytes little
// endian), then raw frames back to back.
void write_inzf(const std::string& path, const std::vector<ChannelFrame>& frames,
                std::size_t frame_bytes);
std::vector<ChannelFrame> read_inzf(const std::string& path, std::size_t* frame_bytes_out = nullptr);

}  // namespace flitsim
