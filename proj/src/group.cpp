#include "petition/group.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>

#include <mutex>
#include <stdexcept>

#include "petition/errors.hpp"
#include "petition/hash.hpp"

namespace petition {

namespace mp = boost::multiprecision;

Bytes int_to_bytes_be(const Int& v, std::size_t width) {
    if (v < 0) throw std::invalid_argument("int_to_bytes_be: negative");
    Bytes raw;
    if (v != 0) {
        mp::export_bits(v, std::back_inserter(raw), 8);
    }
    if (raw.size() > width) throw std::invalid_argument("int_to_bytes_be: overflow");
    Bytes out(width - raw.size(), 0);
    out.insert(out.end(), raw.begin(), raw.end());
    return out;
}

Int bytes_be_to_int(std::span<const std::uint8_t> bytes) {
    Int v = 0;
    for (std::uint8_t b : bytes) {
        v <<= 8;
        v += b;
    }
    return v;
}

Group::Group(std::string id, Int q) : id_(std::move(id)), q_(std::move(q)) {
    q_bits_ = static_cast<unsigned>(mp::msb(q_)) + 1;
    scalar_width_ = (q_bits_ + 7) / 8;
}

Scalar Group::scalar_from(Int value) const {
    Int r = value % q_;
    if (r < 0) r += q_;
    return Scalar{std::move(r)};
}

Scalar Group::scalar_add(const Scalar& a, const Scalar& b) const {
    Int r = a.v + b.v;
    if (r >= q_) r -= q_;
    return Scalar{std::move(r)};
}

Scalar Group::scalar_sub(const Scalar& a, const Scalar& b) const {
    Int r = a.v - b.v;
    if (r < 0) r += q_;
    return Scalar{std::move(r)};
}

Scalar Group::scalar_mul(const Scalar& a, const Scalar& b) const {
    return Scalar{(a.v * b.v) % q_};
}

Scalar Group::scalar_neg(const Scalar& a) const {
    return a.v == 0 ? a : Scalar{q_ - a.v};
}

Scalar Group::scalar_inv(const Scalar& a) const {
    if (a.v == 0) throw parameter_error("non-invertible");
    // q is prime, so a^(q-2) = a^-1.
    return Scalar{mp::powm(a.v, q_ - 2, q_)};
}

Bytes Group::scalar_encode(const Scalar& s) const {
    return int_to_bytes_be(s.v, scalar_width_);
}

Scalar Group::scalar_decode(std::span<const std::uint8_t> bytes) const {
    if (bytes.size() != scalar_width_) {
        throw parameter_error("bad scalar encoding", "wrong width");
    }
    Int v = bytes_be_to_int(bytes);
    if (v >= q_) throw parameter_error("bad scalar encoding", "not reduced");
    return Scalar{std::move(v)};
}

namespace {
/// Masks the top byte so candidates have exactly as many bits as q; keeps
/// the rejection rate below 1/2 per draw.
Int masked_candidate(std::span<const std::uint8_t> raw, unsigned q_bits) {
    Bytes buf(raw.begin(), raw.end());
    unsigned extra = static_cast<unsigned>(buf.size()) * 8 - q_bits;
    buf[0] &= static_cast<std::uint8_t>(0xff >> extra);
    return bytes_be_to_int(buf);
}
}  // namespace

Scalar Group::sample_scalar(RandomSource& rng) const {
    for (;;) {
        Bytes raw = rng.bytes(scalar_width_);
        Int v = masked_candidate(raw, q_bits_);
        if (v < q_) return Scalar{std::move(v)};
    }
}

Scalar Group::sample_nonzero_scalar(RandomSource& rng) const {
    for (;;) {
        Scalar s = sample_scalar(rng);
        if (!s.is_zero()) return s;
    }
}

Scalar Group::hash_to_scalar(std::span<const std::uint8_t> tag,
                             std::span<const std::uint8_t> data) const {
    Bytes input;
    put_field(input, tag);
    input.insert(input.end(), data.begin(), data.end());
    std::size_t base = input.size();
    for (std::uint32_t ctr = 0;; ++ctr) {
        input.resize(base);
        put_u32(input, ctr);
        Bytes digest = sha256(input);
        digest.resize(std::max(digest.size(), scalar_width_));
        Int v = masked_candidate(std::span(digest).first(scalar_width_), q_bits_);
        if (v < q_) return Scalar{std::move(v)};
    }
}

bool Group::valid_encoding(std::span<const std::uint8_t> bytes) const {
    try {
        decode_element(bytes);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// Toy backend: the order-11 subgroup of Z_23*, generator 2. Small enough to
// take discrete logs exhaustively, which is what the oracle tests need.
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kToyModulus = 23;
constexpr std::uint64_t kToyOrder = 11;
constexpr std::uint64_t kToyGenerator = 2;
constexpr std::uint64_t kToyCofactor = 2;  // (23-1)/11

std::uint64_t toy_pow(std::uint64_t base, std::uint64_t e) {
    std::uint64_t r = 1;
    base %= kToyModulus;
    while (e > 0) {
        if (e & 1) r = r * base % kToyModulus;
        base = base * base % kToyModulus;
        e >>= 1;
    }
    return r;
}

class ToyGroup final : public Group {
public:
    ToyGroup() : Group("toy", Int(kToyOrder)) {}

    GroupElement generator() const override { return element(kToyGenerator); }
    GroupElement identity() const override { return element(1); }

    GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
        return element(value(a) * value(b) % kToyModulus);
    }

    GroupElement exp(const GroupElement& base, const Scalar& e) const override {
        return element(toy_pow(value(base), static_cast<std::uint64_t>(e.v)));
    }

    GroupElement inverse(const GroupElement& a) const override {
        return element(toy_pow(value(a), kToyModulus - 2));
    }

    GroupElement decode_element(std::span<const std::uint8_t> bytes) const override {
        if (bytes.size() != 1) {
            throw parameter_error("bad element encoding", "toy elements are one byte");
        }
        std::uint64_t v = bytes[0];
        if (v == 0 || v >= kToyModulus || toy_pow(v, kToyOrder) != 1) {
            throw parameter_error("bad element encoding", "not in subgroup");
        }
        return GroupElement{Bytes{bytes[0]}};
    }

    GroupElement hash_to_group(std::span<const std::uint8_t> tag,
                               std::span<const std::uint8_t> data) const override {
        // Rejection-sample an element of Z_23* and raise it to the cofactor.
        // This lands in the subgroup without ever producing a known
        // discrete log relative to g.
        Bytes input;
        put_field(input, tag);
        input.insert(input.end(), data.begin(), data.end());
        std::size_t base = input.size();
        for (std::uint32_t ctr = 0;; ++ctr) {
            input.resize(base);
            put_u32(input, ctr);
            Bytes digest = sha256(input);
            std::uint64_t candidate = digest[0];
            if (candidate == 0 || candidate >= kToyModulus) continue;
            std::uint64_t member = toy_pow(candidate, kToyCofactor);
            if (member != 1) return element(member);
        }
    }

private:
    static GroupElement element(std::uint64_t v) {
        return GroupElement{Bytes{static_cast<std::uint8_t>(v)}};
    }
    static std::uint64_t value(const GroupElement& e) { return e.encoding.at(0); }
};

// ---------------------------------------------------------------------------
// P-256 backend over OpenSSL. Elements are SEC1 compressed encodings
// (33 bytes; the identity is the single byte 0x00).
// ---------------------------------------------------------------------------

struct BnCtxDeleter {
    void operator()(BN_CTX* c) const { BN_CTX_free(c); }
};
using BnCtx = std::unique_ptr<BN_CTX, BnCtxDeleter>;

struct BnDeleter {
    void operator()(BIGNUM* b) const { BN_free(b); }
};
using Bn = std::unique_ptr<BIGNUM, BnDeleter>;

struct PointDeleter {
    void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
using Point = std::unique_ptr<EC_POINT, PointDeleter>;

Bn int_to_bn(const Int& v, std::size_t width) {
    Bytes bytes = int_to_bytes_be(v, width);
    Bn bn(BN_bin2bn(bytes.data(), static_cast<int>(bytes.size()), nullptr));
    if (!bn) throw std::runtime_error("BN_bin2bn failed");
    return bn;
}

Int bn_to_int(const BIGNUM* bn) {
    Bytes bytes(static_cast<std::size_t>(BN_num_bytes(bn)));
    BN_bn2bin(bn, bytes.data());
    return bytes_be_to_int(bytes);
}

class P256Group final : public Group {
public:
    P256Group() : Group("p256", load_order()), ec_(load_group()) {
        field_prime_ = load_field_prime(ec_);
    }

    ~P256Group() override { EC_GROUP_free(ec_); }

    P256Group(const P256Group&) = delete;
    P256Group& operator=(const P256Group&) = delete;

    GroupElement generator() const override {
        return encode(EC_GROUP_get0_generator(ec_));
    }

    GroupElement identity() const override { return GroupElement{Bytes{0x00}}; }

    GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
        BnCtx ctx(BN_CTX_new());
        Point pa = decode(a), pb = decode(b);
        Point r(EC_POINT_new(ec_));
        if (EC_POINT_add(ec_, r.get(), pa.get(), pb.get(), ctx.get()) != 1) {
            throw std::runtime_error("EC_POINT_add failed");
        }
        return encode(r.get());
    }

    GroupElement exp(const GroupElement& base, const Scalar& e) const override {
        BnCtx ctx(BN_CTX_new());
        Point p = decode(base);
        Bn bn = int_to_bn(e.v, scalar_width_);
        Point r(EC_POINT_new(ec_));
        if (EC_POINT_mul(ec_, r.get(), nullptr, p.get(), bn.get(), ctx.get()) != 1) {
            throw std::runtime_error("EC_POINT_mul failed");
        }
        return encode(r.get());
    }

    GroupElement inverse(const GroupElement& a) const override {
        BnCtx ctx(BN_CTX_new());
        Point p = decode(a);
        if (EC_POINT_invert(ec_, p.get(), ctx.get()) != 1) {
            throw std::runtime_error("EC_POINT_invert failed");
        }
        return encode(p.get());
    }

    GroupElement decode_element(std::span<const std::uint8_t> bytes) const override {
        if (bytes.size() == 1 && bytes[0] == 0x00) return identity();
        if (bytes.size() != 33) {
            throw parameter_error("bad element encoding", "wrong length");
        }
        BnCtx ctx(BN_CTX_new());
        Point p(EC_POINT_new(ec_));
        if (EC_POINT_oct2point(ec_, p.get(), bytes.data(), bytes.size(), ctx.get()) != 1) {
            throw parameter_error("bad element encoding", "not on curve");
        }
        return GroupElement{Bytes(bytes.begin(), bytes.end())};
    }

    GroupElement hash_to_group(std::span<const std::uint8_t> tag,
                               std::span<const std::uint8_t> data) const override {
        // Try-and-increment on compressed x candidates. Cofactor is 1, so
        // any curve point is already in the prime-order group.
        Bytes input;
        put_field(input, tag);
        input.insert(input.end(), data.begin(), data.end());
        std::size_t base = input.size();
        BnCtx ctx(BN_CTX_new());
        for (std::uint32_t ctr = 0;; ++ctr) {
            input.resize(base);
            put_u32(input, ctr);
            Bytes digest = sha256(input);
            Int x = bytes_be_to_int(digest);
            if (x >= field_prime_) continue;
            Bn bx = int_to_bn(x, 32);
            Point p(EC_POINT_new(ec_));
            int y_bit = digest[31] & 1;
            if (EC_POINT_set_compressed_coordinates(ec_, p.get(), bx.get(), y_bit,
                                                    ctx.get()) != 1) {
                continue;
            }
            if (EC_POINT_is_at_infinity(ec_, p.get())) continue;
            return encode(p.get());
        }
    }

private:
    EC_GROUP* ec_;
    Int field_prime_;

    static EC_GROUP* load_group() {
        EC_GROUP* g = EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1);
        if (!g) throw std::runtime_error("failed to load P-256");
        return g;
    }

    static Int load_order() {
        EC_GROUP* g = load_group();
        Int q = bn_to_int(EC_GROUP_get0_order(g));
        EC_GROUP_free(g);
        return q;
    }

    static Int load_field_prime(const EC_GROUP* g) {
        BnCtx ctx(BN_CTX_new());
        Bn p(BN_new()), a(BN_new()), b(BN_new());
        if (EC_GROUP_get_curve(g, p.get(), a.get(), b.get(), ctx.get()) != 1) {
            throw std::runtime_error("EC_GROUP_get_curve failed");
        }
        return bn_to_int(p.get());
    }

    Point decode(const GroupElement& e) const {
        BnCtx ctx(BN_CTX_new());
        Point p(EC_POINT_new(ec_));
        if (e.encoding.size() == 1 && e.encoding[0] == 0x00) {
            if (EC_POINT_set_to_infinity(ec_, p.get()) != 1) {
                throw std::runtime_error("EC_POINT_set_to_infinity failed");
            }
            return p;
        }
        if (EC_POINT_oct2point(ec_, p.get(), e.encoding.data(), e.encoding.size(),
                               ctx.get()) != 1) {
            throw parameter_error("bad element encoding", "not on curve");
        }
        return p;
    }

    GroupElement encode(const EC_POINT* p) const {
        BnCtx ctx(BN_CTX_new());
        if (EC_POINT_is_at_infinity(ec_, p)) return identity();
        Bytes out(33);
        std::size_t n = EC_POINT_point2oct(ec_, p, POINT_CONVERSION_COMPRESSED, out.data(),
                                           out.size(), ctx.get());
        if (n != 33) throw std::runtime_error("EC_POINT_point2oct failed");
        return GroupElement{std::move(out)};
    }
};

}  // namespace

std::shared_ptr<const Group> make_group(std::string_view backend_id) {
    static std::shared_ptr<const Group> toy = std::make_shared<ToyGroup>();
    static std::shared_ptr<const Group> p256 = std::make_shared<P256Group>();
    if (backend_id == "toy") return toy;
    if (backend_id == "p256") return p256;
    throw parameter_error("unknown backend", std::string(backend_id));
}

}  // namespace petition
