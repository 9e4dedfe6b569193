#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "petition/bytes.hpp"
#include "petition/rng.hpp"

namespace petition {

using Int = boost::multiprecision::cpp_int;

/// Element of the scalar field Z_q. Always kept reduced mod q by Group
/// operations; the raw value is visible for tests and serialization.
struct Scalar {
    Int v;

    bool operator==(const Scalar& other) const { return v == other.v; }
    bool operator!=(const Scalar& other) const { return v != other.v; }
    bool is_zero() const { return v == 0; }
};

/// A group element held as its canonical encoding. Equality of encodings is
/// equality of elements (encodings are unique per backend).
struct GroupElement {
    Bytes encoding;

    bool operator==(const GroupElement& other) const { return encoding == other.encoding; }
    bool operator!=(const GroupElement& other) const { return encoding != other.encoding; }
    bool operator<(const GroupElement& other) const { return encoding < other.encoding; }

    std::string hex() const { return to_hex(encoding); }
};

struct GroupDesc {
    std::string id;
    Int q;
    Bytes generator_encoding;
};

/// Cyclic group of prime order q with generator g, plus the scalar field,
/// hashing, and canonical serialization. Two backends: "p256" (NIST P-256)
/// and "toy" (the order-11 subgroup of Z_23*, generator 2) whose discrete
/// logs are brute-forceable in tests.
///
/// All operations are pure; instances are immutable and safe to share
/// across threads. Randomness comes only from caller-owned RandomSource.
class Group {
public:
    virtual ~Group() = default;

    const std::string& id() const { return id_; }
    const Int& order() const { return q_; }
    std::size_t scalar_width() const { return scalar_width_; }
    GroupDesc describe() const { return {id_, q_, generator().encoding}; }

    // -- scalar field ------------------------------------------------------

    Scalar scalar_from(Int value) const;
    Scalar scalar_from_u64(std::uint64_t value) const { return scalar_from(Int(value)); }
    Scalar scalar_add(const Scalar& a, const Scalar& b) const;
    Scalar scalar_sub(const Scalar& a, const Scalar& b) const;
    Scalar scalar_mul(const Scalar& a, const Scalar& b) const;
    Scalar scalar_neg(const Scalar& a) const;
    /// Throws Error("non-invertible") for zero.
    Scalar scalar_inv(const Scalar& a) const;

    /// Fixed-width big-endian encoding.
    Bytes scalar_encode(const Scalar& s) const;
    /// Rejects wrong width and values >= q.
    Scalar scalar_decode(std::span<const std::uint8_t> bytes) const;

    Scalar sample_scalar(RandomSource& rng) const;
    Scalar sample_nonzero_scalar(RandomSource& rng) const;

    /// Deterministic, uniform-looking over [0, q); distinct tags give
    /// independent functions.
    Scalar hash_to_scalar(std::span<const std::uint8_t> tag,
                          std::span<const std::uint8_t> data) const;

    // -- group -------------------------------------------------------------

    virtual GroupElement generator() const = 0;
    virtual GroupElement identity() const = 0;
    bool is_identity(const GroupElement& e) const { return e == identity(); }

    virtual GroupElement mul(const GroupElement& a, const GroupElement& b) const = 0;
    virtual GroupElement exp(const GroupElement& base, const Scalar& e) const = 0;
    virtual GroupElement inverse(const GroupElement& a) const = 0;

    GroupElement exp_g(const Scalar& e) const { return exp(generator(), e); }

    /// Validates and decodes a canonical encoding; throws on non-group bytes.
    virtual GroupElement decode_element(std::span<const std::uint8_t> bytes) const = 0;
    bool valid_encoding(std::span<const std::uint8_t> bytes) const;

    /// Deterministic map into the group with unknown discrete log w.r.t. g.
    /// Never the construction exp(g, hash_to_scalar(...)).
    virtual GroupElement hash_to_group(std::span<const std::uint8_t> tag,
                                       std::span<const std::uint8_t> data) const = 0;

protected:
    Group(std::string id, Int q);

    std::string id_;
    Int q_;
    std::size_t scalar_width_;
    unsigned q_bits_;
};

/// backend_id is "toy" or "p256"; throws on anything else.
std::shared_ptr<const Group> make_group(std::string_view backend_id);

/// Helpers shared by backends and serialization code.
Bytes int_to_bytes_be(const Int& v, std::size_t width);
Int bytes_be_to_int(std::span<const std::uint8_t> bytes);

}  // namespace petition
