#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "petition/bytes.hpp"

namespace petition {

/// Deterministic byte source: a SHA-256 counter generator keyed by the seed.
/// Every randomized operation in the library takes one of these, so a whole
/// petition lifecycle replays bit-exactly from (script, seed).
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);
    explicit RandomSource(const Bytes& seed_material);

    /// Fresh source with an OS-random seed, for callers without a script seed.
    static RandomSource system();

    void fill(std::span<std::uint8_t> out);
    Bytes bytes(std::size_t n);

    /// Uniform in [0, bound) by rejection; bound must be nonzero.
    std::uint64_t uniform_u64(std::uint64_t bound);

    /// Independent child stream; forking isolates per-party randomness from
    /// consumption order elsewhere.
    RandomSource fork(std::string_view label);

private:
    Bytes key_;            // 32 bytes
    std::uint64_t counter_ = 0;
    Bytes block_;          // unconsumed output
    std::size_t block_pos_ = 0;

    void refill();
};

}  // namespace petition
