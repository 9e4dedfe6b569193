#pragma once

#include <span>

#include "petition/bytes.hpp"

namespace petition {

/// SHA-256 of data; 32 bytes.
Bytes sha256(std::span<const std::uint8_t> data);

/// SHA-256 over a length-prefixed (tag, data) pair. The prefix keeps distinct
/// tag/data splits from colliding.
Bytes tagged_hash(std::span<const std::uint8_t> tag, std::span<const std::uint8_t> data);

struct AeadBox {
    Bytes nonce;  // 12 bytes
    Bytes body;   // ciphertext || 16-byte tag
};

/// AES-256-GCM. key must be 32 bytes, nonce 12 bytes.
AeadBox aead_seal(std::span<const std::uint8_t> key, Bytes nonce,
                  std::span<const std::uint8_t> plaintext,
                  std::span<const std::uint8_t> aad);

/// Throws Error("authentication failure") when the tag does not verify.
Bytes aead_open(std::span<const std::uint8_t> key, const AeadBox& box,
                std::span<const std::uint8_t> aad);

}  // namespace petition
