#include "petition/dkg.hpp"

#include "petition/errors.hpp"

namespace petition::dkg {

FragmentContribution contribute_with_secret(const Group& group, std::uint32_t rabbit,
                                            std::uint32_t fragment, const Scalar& secret,
                                            std::uint32_t t, std::uint32_t k,
                                            RandomSource& rng) {
    if (rabbit == 0 || rabbit > k || fragment == 0) {
        throw parameter_error("invalid sharing parameters", "bad contribution indices");
    }
    std::vector<Scalar> coeffs;
    coeffs.reserve(t);
    coeffs.push_back(secret);
    for (std::uint32_t i = 1; i < t; ++i) coeffs.push_back(group.sample_scalar(rng));
    auto sharing = vss::share_from_coefficients(group, coeffs, k);
    return {rabbit, fragment, secret, std::move(sharing.commitment), std::move(sharing.shares)};
}

FragmentContribution contribute(const Group& group, std::uint32_t rabbit, std::uint32_t fragment,
                                std::uint32_t t, std::uint32_t k, RandomSource& rng) {
    Scalar secret = group.sample_scalar(rng);
    return contribute_with_secret(group, rabbit, fragment, secret, t, k, rng);
}

PetitionPublicKey aggregate_public(const Group& group, const CommitmentGrid& commitments,
                                   std::uint32_t k, std::uint32_t n) {
    if (commitments.size() != n) throw protocol_error("incomplete ceremony");
    PetitionPublicKey pk;
    pk.p = group.identity();
    pk.fragment_publics.reserve(n);
    for (const auto& row : commitments) {
        if (row.size() != k) throw protocol_error("incomplete ceremony");
        GroupElement fj = group.identity();
        for (const auto& comm : row) {
            if (comm.coeff_commits.empty()) throw protocol_error("incomplete ceremony");
            fj = group.mul(fj, comm.coeff_commits[0]);
        }
        pk.p = group.mul(pk.p, fj);
        pk.fragment_publics.push_back(std::move(fj));
    }
    if (group.is_identity(pk.p)) throw protocol_error("degenerate key");
    return pk;
}

KeyFragment reconstruct_fragment(const Group& group, std::uint32_t fragment,
                                 const std::vector<std::vector<vss::ShamirShare>>& share_sets,
                                 std::uint32_t t, const GroupElement& fragment_public) {
    Scalar sum = group.scalar_from_u64(0);
    for (const auto& shares : share_sets) {
        sum = group.scalar_add(sum, vss::reconstruct(group, shares, t));
    }
    if (group.exp_g(sum) != fragment_public) {
        throw verification_error("fragment verification failed");
    }
    return {fragment, sum};
}

CeremonyDiagnostics verify_ceremony(const Group& group, const CommitmentGrid& commitments,
                                    const PetitionPublicKey& pk, std::uint32_t k,
                                    std::uint32_t n, std::uint32_t t) {
    CeremonyDiagnostics d;
    auto fail = [&d](std::string msg) {
        d.ok = false;
        d.failures.push_back(std::move(msg));
    };

    if (commitments.size() != n) {
        fail("commitment grid has wrong fragment count");
        return d;
    }
    if (pk.fragment_publics.size() != n) {
        fail("fragment public count mismatch");
        return d;
    }

    GroupElement product = group.identity();
    for (std::uint32_t j = 0; j < n; ++j) {
        const auto& row = commitments[j];
        if (row.size() != k) {
            fail("fragment " + std::to_string(j + 1) + " missing contributions");
            continue;
        }
        GroupElement fj = group.identity();
        for (std::uint32_t i = 0; i < k; ++i) {
            if (row[i].coeff_commits.size() != t) {
                fail("contribution (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                     ") has wrong commitment length");
            }
            if (!row[i].coeff_commits.empty()) {
                fj = group.mul(fj, row[i].coeff_commits[0]);
            }
        }
        if (fj != pk.fragment_publics[j]) {
            fail("fragment public " + std::to_string(j + 1) +
                 " does not recompute from commitments");
        }
        product = group.mul(product, pk.fragment_publics[j]);
    }
    if (product != pk.p) fail("public key does not recompute from fragment publics");
    if (group.is_identity(pk.p)) fail("public key is the identity");

    // Structural independence: with k >= 2 every fragment is a product of
    // contributions from k distinct rabbit slots, so no single party
    // accounts for a fragment on its own. That is exactly the row-shape
    // requirement already enforced above.
    return d;
}

CeremonyResult run_ceremony(const Group& group, std::uint32_t n, std::uint32_t k,
                            std::uint32_t t, RandomSource& rng, const CeremonyFaults& faults) {
    if (n == 0 || k == 0 || t == 0 || t > k) {
        throw parameter_error("invalid petition parameters");
    }
    CeremonyResult result;
    result.commitments.assign(n, {});
    result.stores.resize(k);
    for (std::uint32_t i = 0; i < k; ++i) {
        result.stores[i].rabbit = i + 1;
        result.stores[i].received.assign(n, std::vector<vss::ShamirShare>(k));
    }

    std::vector<std::string> culprits;
    for (std::uint32_t j = 1; j <= n; ++j) {
        for (std::uint32_t i = 1; i <= k; ++i) {
            auto contribution = contribute(group, i, j, t, k, rng);
            bool corrupt_this = faults.bad_share_from && *faults.bad_share_from == i && j == 1;
            for (std::uint32_t recipient = 1; recipient <= k; ++recipient) {
                vss::ShamirShare share = contribution.outgoing_shares[recipient - 1];
                if (corrupt_this && recipient != i) {
                    share.value = group.scalar_add(share.value, group.scalar_from_u64(1));
                }
                // Recipient-side verification against the broadcast commitment.
                if (!vss::verify_share(group, share, contribution.commitment)) {
                    culprits.push_back("rabbit " + std::to_string(i));
                    break;
                }
                result.stores[recipient - 1].received[j - 1][i - 1] = share;
            }
            result.commitments[j - 1].push_back(contribution.commitment);
        }
    }
    if (!culprits.empty()) {
        std::string detail;
        for (const auto& c : culprits) detail += (detail.empty() ? "" : ", ") + c;
        throw protocol_error("ceremony aborted", detail);
    }
    result.pk = aggregate_public(group, result.commitments, k, n);
    return result;
}

}  // namespace petition::dkg
