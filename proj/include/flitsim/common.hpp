#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace flitsim {

// Error taxonomy. CLI maps these to exit codes: config 2, protocol 3, deadlock 4.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct EncodeError : std::runtime_error {
    explicit EncodeError(const std::string& what) : std::runtime_error(what) {}
};

struct DecodeError : std::runtime_error {
    explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

// Desynchronized caches, fence counter overflow, and similar contract breaks.
struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

struct DeadlockError : std::runtime_error {
    explicit DeadlockError(const std::string& what) : std::runtime_error(what) {}
};

using SimTime = std::uint64_t;  // cycles

inline std::uint32_t wrap_add_u32(std::uint32_t a, std::uint32_t b) { return a + b; }

// Two's-complement wrapping arithmetic on signed 32-bit values.
inline std::int32_t wrap_add_i32(std::int32_t a, std::int32_t b) {
    return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) + static_cast<std::uint32_t>(b));
}

inline std::int32_t wrap_sub_i32(std::int32_t a, std::int32_t b) {
    return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) - static_cast<std::uint32_t>(b));
}

}  // namespace flitsim
