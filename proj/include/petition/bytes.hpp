#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace petition {

using Bytes = std::vector<std::uint8_t>;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_string(std::span<const std::uint8_t> b) {
    return std::string(b.begin(), b.end());
}

std::string to_hex(std::span<const std::uint8_t> data);

/// Strict inverse of to_hex: lowercase/uppercase accepted, throws
/// std::invalid_argument on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

/// a || b, used for domain-separated hash inputs and p_U construction.
Bytes concat(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Big-endian 4-byte length prefix; the canonical field framing for
/// ciphertext serialization.
void put_u32(Bytes& out, std::uint32_t v);
void put_field(Bytes& out, std::span<const std::uint8_t> field);

/// Reads one length-prefixed field starting at offset, advancing it.
/// Throws std::invalid_argument on truncation.
Bytes get_field(std::span<const std::uint8_t> in, std::size_t& offset);

}  // namespace petition
