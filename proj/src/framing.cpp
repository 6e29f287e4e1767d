#include "flitsim/framing.hpp"

#include <cstring>
#include <fstream>

namespace flitsim {

namespace {

bool has_header(RecordKind k) {
    switch (k) {
        case RecordKind::PacketHead:
        case RecordKind::PacketBody:
        case RecordKind::PositionAllocate:
        case RecordKind::PositionBypass:
            return true;
        default:
            return false;
    }
}

}  // namespace

RecordPacker::RecordPacker(std::size_t frame_bytes) : frame_bytes_(frame_bytes) {
    if (frame_bytes_ < 16) throw ConfigError("frame length must be at least 16 bytes");
}

void RecordPacker::append(const std::uint8_t* data, std::size_t n) {
    pending_.insert(pending_.end(), data, data + n);
    while (pending_.size() >= frame_bytes_) {
        ChannelFrame f;
        f.bytes.assign(pending_.begin(), pending_.begin() + static_cast<long>(frame_bytes_));
        frames_.push_back(std::move(f));
        pending_.erase(pending_.begin(), pending_.begin() + static_cast<long>(frame_bytes_));
    }
}

void RecordPacker::push(const WireRecord& r) {
    if (r.payload.nbytes > 16) throw EncodeError("record payload exceeds 16 bytes");
    std::uint8_t hdr[11];
    std::size_t n = 0;
    hdr[n++] = static_cast<std::uint8_t>((static_cast<unsigned>(r.kind) << 5) | r.payload.nbytes);
    if (r.kind == RecordKind::CompressedPosition) {
        hdr[n++] = static_cast<std::uint8_t>(r.cache_index);
        hdr[n++] = static_cast<std::uint8_t>(r.cache_index >> 8);
    } else if (has_header(r.kind)) {
        for (int i = 0; i < 8; ++i) hdr[n++] = static_cast<std::uint8_t>(r.header_bits >> (8 * i));
    } else {
        throw EncodeError("cannot pack record kind " + std::to_string(static_cast<unsigned>(r.kind)));
    }
    append(hdr, n);
    append(r.payload.bytes.data(), r.payload.nbytes);
    total_payload_bytes_ += n + r.payload.nbytes;
}

void RecordPacker::flush() {
    if (pending_.empty()) return;
    const std::size_t fill = frame_bytes_ - pending_.size();
    const std::uint8_t pad = static_cast<std::uint8_t>(static_cast<unsigned>(RecordKind::FramePad) << 5);
    append(&pad, 1);
    total_pad_bytes_ += fill;
    if (fill > 1) {
        std::vector<std::uint8_t> zeros(fill - 1, 0);
        append(zeros.data(), zeros.size());
    }
}

std::vector<ChannelFrame> RecordPacker::take_frames() {
    std::vector<ChannelFrame> out;
    out.swap(frames_);
    return out;
}

RecordUnpacker::RecordUnpacker(std::size_t frame_bytes) : frame_bytes_(frame_bytes) {}

void RecordUnpacker::feed(const ChannelFrame& f) {
    if (f.bytes.size() != frame_bytes_)
        throw DecodeError("frame length " + std::to_string(f.bytes.size()) + " != configured " +
                          std::to_string(frame_bytes_));
    buf_.insert(buf_.end(), f.bytes.begin(), f.bytes.end());
}

std::optional<WireRecord> RecordUnpacker::next() {
    for (;;) {
        if (pos_ >= buf_.size()) break;
        const std::uint8_t desc = buf_[pos_];
        const auto kind = static_cast<RecordKind>(desc >> 5);
        const std::uint8_t nbytes = desc & 0x1F;

        if (kind == RecordKind::FramePad) {
            // Skip to the end of the frame this descriptor sits in.
            const std::uint64_t abs = consumed_ + pos_;
            const std::uint64_t frame_end = (abs / frame_bytes_ + 1) * frame_bytes_;
            const std::uint64_t skip_to = frame_end - consumed_;
            if (skip_to > buf_.size()) break;  // padding tail not fully received yet
            pos_ = static_cast<std::size_t>(skip_to);
            continue;
        }

        if (nbytes > 16)
            throw DecodeError("record payload length " + std::to_string(nbytes) +
                              " at stream offset " + std::to_string(consumed_ + pos_));
        std::size_t fixed;
        if (kind == RecordKind::CompressedPosition) {
            fixed = 3;
        } else if (has_header(kind)) {
            fixed = 9;
        } else {
            throw DecodeError("unknown record kind " + std::to_string(desc >> 5) +
                              " at stream offset " + std::to_string(consumed_ + pos_));
        }
        const std::size_t need = fixed + nbytes;
        if (buf_.size() - pos_ < need) break;

        WireRecord r;
        r.kind = kind;
        r.payload.nbytes = nbytes;
        r.payload.abandoned = nbytes == 16;
        std::size_t p = pos_ + 1;
        if (kind == RecordKind::CompressedPosition) {
            r.cache_index = static_cast<std::uint16_t>(buf_[p] | (buf_[p + 1] << 8));
            p += 2;
        } else {
            std::uint64_t h = 0;
            for (int i = 0; i < 8; ++i) h |= static_cast<std::uint64_t>(buf_[p + static_cast<std::size_t>(i)]) << (8 * i);
            r.header_bits = h;
            p += 8;
        }
        for (std::uint8_t i = 0; i < nbytes; ++i) r.payload.bytes[i] = buf_[p + i];
        pos_ += need;

        // Compact occasionally so long streams stay O(frame).
        if (pos_ > 4 * frame_bytes_) {
            buf_.erase(buf_.begin(), buf_.begin() + static_cast<long>(pos_));
            consumed_ += pos_;
            pos_ = 0;
        }
        return r;
    }
    return std::nullopt;
}

void RecordUnpacker::finish() {
    if (next().has_value())
        throw ProtocolError("finish() called with complete records still queued");
    if (pos_ != buf_.size())
        throw DecodeError("stream truncated mid-record at byte offset " +
                          std::to_string(consumed_ + pos_));
}

std::vector<ChannelFrame> pack_records(const std::vector<WireRecord>& records, std::size_t frame_bytes) {
    RecordPacker p(frame_bytes);
    for (const auto& r : records) p.push(r);
    p.flush();
    return p.take_frames();
}

std::vector<WireRecord> unpack_records(const std::vector<ChannelFrame>& frames, std::size_t frame_bytes) {
    RecordUnpacker u(frame_bytes);
    std::vector<WireRecord> out;
    for (const auto& f : frames) {
        u.feed(f);
        while (auto r = u.next()) out.push_back(*r);
    }
    u.finish();
    return out;
}

void write_inzf(const std::string& path, const std::vector<ChannelFrame>& frames, std::size_t frame_bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path + " for writing");
    f.write("INZF", 4);
    const std::uint8_t version = 1;
    f.put(static_cast<char>(version));
    f.put(static_cast<char>(frame_bytes & 0xFF));
    f.put(static_cast<char>((frame_bytes >> 8) & 0xFF));
    for (const auto& fr : frames)
        f.write(reinterpret_cast<const char*>(fr.bytes.data()), static_cast<long>(fr.bytes.size()));
    if (!f) throw ConfigError("write failed: " + path);
}

std::vector<ChannelFrame> read_inzf(const std::string& path, std::size_t* frame_bytes_out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, "INZF", 4) != 0) throw DecodeError("bad INZF magic in " + path);
    const int version = f.get();
    if (version != 1) throw DecodeError("unsupported INZF version " + std::to_string(version));
    const int lo = f.get(), hi = f.get();
    if (lo < 0 || hi < 0) throw DecodeError("truncated INZF header in " + path);
    const std::size_t frame_bytes = static_cast<std::size_t>(lo) | (static_cast<std::size_t>(hi) << 8);
    if (frame_bytes_out) *frame_bytes_out = frame_bytes;

    std::vector<ChannelFrame> frames;
    for (;;) {
        ChannelFrame fr;
        fr.bytes.resize(frame_bytes);
        f.read(reinterpret_cast<char*>(fr.bytes.data()), static_cast<long>(frame_bytes));
        if (f.gcount() == 0) break;
        if (static_cast<std::size_t>(f.gcount()) != frame_bytes)
            throw DecodeError("truncated frame at end of " + path);
        frames.push_back(std::move(fr));
    }
    return frames;
}

}  // namespace flitsim
