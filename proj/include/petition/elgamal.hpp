#pragma once

#include "petition/group.hpp"
#include "petition/rng.hpp"

namespace petition {

/// Textbook ElGamal over G: m ↦ (g^y, m·pk^y).
struct ElGamalCiphertext {
    GroupElement c1;  // g^y
    GroupElement c2;  // m * pk^y

    bool operator==(const ElGamalCiphertext&) const = default;

    Bytes serialize() const;
    static ElGamalCiphertext deserialize(const Group& group, std::span<const std::uint8_t> in);
};

/// KEM + AES-256-GCM for arbitrary byte payloads. Decryption under any key
/// other than the matching secret fails authentication.
struct HybridCiphertext {
    std::uint8_t alg = 1;  // 1 = AES-256-GCM with SHA-256 KDF
    GroupElement kem;      // g^y
    Bytes nonce;
    Bytes body;            // ciphertext || tag

    bool operator==(const HybridCiphertext&) const = default;

    Bytes serialize() const;
    static HybridCiphertext deserialize(const Group& group, std::span<const std::uint8_t> in);
};

namespace elgamal {

ElGamalCiphertext encrypt(const Group& group, const GroupElement& pk, const GroupElement& m,
                          RandomSource& rng);

/// Deterministic variant with caller-chosen nonce; tests use it to pin
/// ciphertexts and to exercise the degenerate y = 0 case.
ElGamalCiphertext encrypt_with_nonce(const Group& group, const GroupElement& pk,
                                     const GroupElement& m, const Scalar& y);

GroupElement decrypt(const Group& group, const Scalar& secret, const ElGamalCiphertext& ct);

HybridCiphertext hybrid_encrypt(const Group& group, const GroupElement& pk,
                                std::span<const std::uint8_t> payload, RandomSource& rng);

/// Throws Error("authentication failure") on a wrong key or any tampering.
Bytes hybrid_decrypt(const Group& group, const Scalar& secret, const HybridCiphertext& ct);

}  // namespace elgamal
}  // namespace petition
