#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "petition/group.hpp"
#include "petition/vss.hpp"

namespace petition::dhash {

/// One rabbit's share of the hash key k_P plus the public commitment that
/// lets anyone check the share is consistent.
struct HashKeyShare {
    std::uint32_t rabbit = 0;
    vss::ShamirShare share;
    vss::FeldmanCommitment commitment;
};

/// A rabbit's slice of one Beaver triple: shares of (a, b, c) with c = a*b,
/// all at the rabbit's index.
struct TripleShare {
    vss::ShamirShare a, b, c;

    std::uint32_t index() const { return a.index; }
};

struct BeaverTriple {
    std::uint64_t id = 0;
    std::vector<TripleShare> shares;  // per rabbit, index i-1
};

struct HashSetup {
    std::vector<HashKeyShare> key_shares;  // per rabbit
    vss::FeldmanCommitment key_commitment;
    GroupElement base;  // g_P, derived from the petition id with unknown dlog
};

/// Shares a fresh nonzero hash key with threshold t among k rabbits and
/// derives the petition-specific base element.
HashSetup hash_setup(const Group& group, std::uint32_t t, std::uint32_t k,
                     std::span<const std::uint8_t> petition_id, RandomSource& rng);

/// Trusted-dealer triple generation.
BeaverTriple triple_gen(const Group& group, std::uint32_t t, std::uint32_t k, std::uint64_t id,
                        RandomSource& rng);

/// Test hook with forced (a, b); c is computed.
BeaverTriple triple_gen_with_values(const Group& group, std::uint32_t t, std::uint32_t k,
                                    std::uint64_t id, const Scalar& a, const Scalar& b,
                                    RandomSource& rng);

// --- the multiplication protocol, step by step -----------------------------
// Each quorum rabbit opens d_i = u_i - a_i and e_i = key_i - b_i; the opened
// scalars reconstruct to d = u - a and e = k_P - b. Every rabbit then forms
// z_i = c_i + d*b_i + e*a_i + d*e, a threshold-t sharing of k_P * u, and
// reveals it only in the exponent as base^{z_i}.

struct MaskedOpening {
    std::uint32_t index = 0;
    Scalar d, e;
};

MaskedOpening open_masks(const Group& group, const vss::ShamirShare& u_share,
                         const vss::ShamirShare& key_share, const TripleShare& triple);

struct OpenedMasks {
    Scalar d, e;
};

OpenedMasks combine_openings(const Group& group, std::span<const MaskedOpening> openings,
                             std::uint32_t t);

Scalar product_share(const Group& group, const TripleShare& triple, const OpenedMasks& masks);

/// A rabbit's full state for one evaluation.
struct Participant {
    vss::ShamirShare u_share;
    HashKeyShare key_share;
    TripleShare triple;
};

/// Synchronous evaluation of h_P(u) = base^{k_P * u} from >= t participants
/// holding shares at matching indices. Throws "insufficient participants"
/// and "mismatched session" (index disagreement between a participant's
/// shares).
GroupElement dist_hash_eval(const Group& group, const GroupElement& base,
                            std::span<const Participant> participants, std::uint32_t t);

/// Test-only centralized oracle: base^{k_P * u}.
GroupElement local_hash_oracle(const Group& group, const Scalar& u, const Scalar& hash_key,
                               const GroupElement& base);

/// Dealer-side pool with single-claim semantics. take() hands out each
/// triple exactly once; re-claiming a consumed id is "triple reuse".
class TriplePool {
public:
    void provision(BeaverTriple triple);
    std::size_t remaining() const { return available_.size(); }

    /// Lowest-id unclaimed triple. Throws "insufficient triples" when empty.
    BeaverTriple take_next();

    /// Claims a specific id; "triple reuse" if already taken, "insufficient
    /// triples" if never provisioned.
    BeaverTriple take(std::uint64_t id);

private:
    std::map<std::uint64_t, BeaverTriple> available_;
    std::vector<std::uint64_t> consumed_;
};

}  // namespace petition::dhash
