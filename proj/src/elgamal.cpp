#include "petition/elgamal.hpp"

#include "petition/errors.hpp"
#include "petition/hash.hpp"

namespace petition {

Bytes ElGamalCiphertext::serialize() const {
    Bytes out;
    put_field(out, c1.encoding);
    put_field(out, c2.encoding);
    return out;
}

ElGamalCiphertext ElGamalCiphertext::deserialize(const Group& group,
                                                 std::span<const std::uint8_t> in) {
    std::size_t off = 0;
    GroupElement c1 = group.decode_element(get_field(in, off));
    GroupElement c2 = group.decode_element(get_field(in, off));
    if (off != in.size()) throw parameter_error("bad ciphertext encoding", "trailing bytes");
    return {std::move(c1), std::move(c2)};
}

Bytes HybridCiphertext::serialize() const {
    Bytes out;
    out.push_back(alg);
    put_field(out, kem.encoding);
    put_field(out, nonce);
    put_field(out, body);
    return out;
}

HybridCiphertext HybridCiphertext::deserialize(const Group& group,
                                               std::span<const std::uint8_t> in) {
    if (in.empty()) throw parameter_error("bad ciphertext encoding", "empty");
    HybridCiphertext ct;
    ct.alg = in[0];
    if (ct.alg != 1) throw parameter_error("bad ciphertext encoding", "unknown algorithm");
    std::size_t off = 1;
    ct.kem = group.decode_element(get_field(in, off));
    ct.nonce = get_field(in, off);
    ct.body = get_field(in, off);
    if (off != in.size()) throw parameter_error("bad ciphertext encoding", "trailing bytes");
    return ct;
}

namespace elgamal {

namespace {

/// key = SHA-256("petition-kem-v1" framing || group id || kem || shared).
Bytes derive_key(const Group& group, const GroupElement& kem, const GroupElement& shared) {
    Bytes material = to_bytes(group.id());
    put_field(material, kem.encoding);
    put_field(material, shared.encoding);
    return tagged_hash(to_bytes("petition-kem-v1"), material);
}

}  // namespace

ElGamalCiphertext encrypt_with_nonce(const Group& group, const GroupElement& pk,
                                     const GroupElement& m, const Scalar& y) {
    if (group.is_identity(pk)) throw parameter_error("degenerate key");
    return {group.exp_g(y), group.mul(m, group.exp(pk, y))};
}

ElGamalCiphertext encrypt(const Group& group, const GroupElement& pk, const GroupElement& m,
                          RandomSource& rng) {
    return encrypt_with_nonce(group, pk, m, group.sample_scalar(rng));
}

GroupElement decrypt(const Group& group, const Scalar& secret, const ElGamalCiphertext& ct) {
    // m = c2 * c1^{-s}
    return group.mul(ct.c2, group.exp(ct.c1, group.scalar_neg(secret)));
}

HybridCiphertext hybrid_encrypt(const Group& group, const GroupElement& pk,
                                std::span<const std::uint8_t> payload, RandomSource& rng) {
    if (group.is_identity(pk)) throw parameter_error("degenerate key");
    Scalar y = group.sample_scalar(rng);
    GroupElement kem = group.exp_g(y);
    Bytes key = derive_key(group, kem, group.exp(pk, y));
    AeadBox box = aead_seal(key, rng.bytes(12), payload, kem.encoding);
    return HybridCiphertext{1, std::move(kem), std::move(box.nonce), std::move(box.body)};
}

Bytes hybrid_decrypt(const Group& group, const Scalar& secret, const HybridCiphertext& ct) {
    Bytes key = derive_key(group, ct.kem, group.exp(ct.kem, secret));
    return aead_open(key, AeadBox{ct.nonce, ct.body}, ct.kem.encoding);
}

}  // namespace elgamal
}  // namespace petition
