#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "petition/group.hpp"
#include "petition/vss.hpp"

namespace petition::dkg {

/// Rabbit i's randomness for fragment j: the secret x_{i,j}, its Feldman
/// commitment, and the k shares it deals out (including a self-share at its
/// own index, so any t of k rabbits can reconstruct with or without i).
struct FragmentContribution {
    std::uint32_t rabbit = 0;    // i in [1, k]
    std::uint32_t fragment = 0;  // j in [1, n]
    Scalar secret;
    vss::FeldmanCommitment commitment;
    std::vector<vss::ShamirShare> outgoing_shares;
};

/// The published key material: p = prod_j F_j with F_j = prod_i g^{x_{i,j}}.
struct PetitionPublicKey {
    GroupElement p;
    std::vector<GroupElement> fragment_publics;

    bool operator==(const PetitionPublicKey&) const = default;
};

struct KeyFragment {
    std::uint32_t index = 0;  // j
    Scalar value;             // s_j = sum_i x_{i,j}
};

/// Commitments indexed [fragment j-1][rabbit i-1].
using CommitmentGrid = std::vector<std::vector<vss::FeldmanCommitment>>;

FragmentContribution contribute(const Group& group, std::uint32_t rabbit,
                                std::uint32_t fragment, std::uint32_t t, std::uint32_t k,
                                RandomSource& rng);

/// Test hook: forces x_{i,j} instead of sampling it.
FragmentContribution contribute_with_secret(const Group& group, std::uint32_t rabbit,
                                            std::uint32_t fragment, const Scalar& secret,
                                            std::uint32_t t, std::uint32_t k,
                                            RandomSource& rng);

/// Computes F_j and p from the full commitment grid. Throws
/// "incomplete ceremony" when the grid is not exactly k x n, and
/// "degenerate key" when p is the identity.
PetitionPublicKey aggregate_public(const Group& group, const CommitmentGrid& commitments,
                                   std::uint32_t k, std::uint32_t n);

/// s_j from per-contribution share sets: share_sets[i-1] holds >= t shares of
/// x_{i,j}. The result is checked against fragment_public before release;
/// a mismatch throws "fragment verification failed".
KeyFragment reconstruct_fragment(const Group& group, std::uint32_t fragment,
                                 const std::vector<std::vector<vss::ShamirShare>>& share_sets,
                                 std::uint32_t t, const GroupElement& fragment_public);

struct CeremonyDiagnostics {
    bool ok = true;
    std::vector<std::string> failures;
};

/// Public verification of a finished ceremony: grid shape, per-fragment
/// recomputation of F_j, p = prod F_j, non-identity p, and the structural
/// independence check (>= 2 contributions per fragment when k >= 2).
CeremonyDiagnostics verify_ceremony(const Group& group, const CommitmentGrid& commitments,
                                    const PetitionPublicKey& pk, std::uint32_t k,
                                    std::uint32_t n, std::uint32_t t);

/// What each rabbit keeps after the ceremony: received[j-1][i-1] is its
/// share of contribution (i,j).
struct RabbitShareStore {
    std::uint32_t rabbit = 0;
    std::vector<std::vector<vss::ShamirShare>> received;

    bool erased() const { return received.empty(); }
    void erase() { received.clear(); }
};

struct CeremonyResult {
    CommitmentGrid commitments;
    PetitionPublicKey pk;
    std::vector<RabbitShareStore> stores;  // by rabbit, index i-1
};

/// Scripted misbehavior for attack scenarios.
struct CeremonyFaults {
    /// Rabbit that deals a corrupted share (off-by-one value) of one of its
    /// contributions; triggers an abort with attribution.
    std::optional<std::uint32_t> bad_share_from;
};

/// Runs the whole key-generation ceremony in process: every rabbit
/// contributes to every fragment, shares are dealt and verified by their
/// recipients, and the public key is aggregated. An unverifiable share
/// aborts with the culprit named in the error detail.
CeremonyResult run_ceremony(const Group& group, std::uint32_t n, std::uint32_t k,
                            std::uint32_t t, RandomSource& rng,
                            const CeremonyFaults& faults = {});

}  // namespace petition::dkg
