#include "petition/rng.hpp"

#include <cstring>
#include <random>
#include <stdexcept>

#include "petition/hash.hpp"

namespace petition {

namespace {
Bytes u64_be(std::uint64_t v) {
    Bytes b(8);
    for (int i = 7; i >= 0; --i) {
        b[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
    return b;
}
}  // namespace

RandomSource::RandomSource(std::uint64_t seed)
    : RandomSource(u64_be(seed)) {}

RandomSource::RandomSource(const Bytes& seed_material) {
    key_ = tagged_hash(to_bytes("petition-drbg-seed"), seed_material);
}

RandomSource RandomSource::system() {
    std::random_device rd;
    Bytes seed(32);
    for (std::size_t i = 0; i < seed.size(); i += 4) {
        std::uint32_t w = rd();
        std::memcpy(seed.data() + i, &w, 4);
    }
    return RandomSource(seed);
}

void RandomSource::refill() {
    Bytes input = key_;
    Bytes ctr = u64_be(counter_++);
    input.insert(input.end(), ctr.begin(), ctr.end());
    block_ = sha256(input);
    block_pos_ = 0;
}

void RandomSource::fill(std::span<std::uint8_t> out) {
    std::size_t written = 0;
    while (written < out.size()) {
        if (block_pos_ >= block_.size()) refill();
        std::size_t take = std::min(out.size() - written, block_.size() - block_pos_);
        std::memcpy(out.data() + written, block_.data() + block_pos_, take);
        block_pos_ += take;
        written += take;
    }
}

Bytes RandomSource::bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
}

std::uint64_t RandomSource::uniform_u64(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_u64: zero bound");
    // Rejection over a multiple of bound to avoid modulo bias.
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    for (;;) {
        std::uint8_t raw[8];
        fill(raw);
        std::uint64_t v = 0;
        for (std::uint8_t b : raw) v = (v << 8) | b;
        if (v < limit) return v % bound;
    }
}

RandomSource RandomSource::fork(std::string_view label) {
    Bytes material = key_;
    Bytes tag = to_bytes(label);
    put_field(material, tag);
    return RandomSource(material);
}

}  // namespace petition
