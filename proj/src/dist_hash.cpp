#include "petition/dist_hash.hpp"

#include <algorithm>

#include "petition/errors.hpp"

namespace petition::dhash {

HashSetup hash_setup(const Group& group, std::uint32_t t, std::uint32_t k,
                     std::span<const std::uint8_t> petition_id, RandomSource& rng) {
    if (t == 0 || t > k) throw parameter_error("invalid sharing parameters");
    // A zero key would hash every identifier to the identity; resample.
    Scalar key = group.sample_nonzero_scalar(rng);
    auto sharing = vss::share(group, key, t, k, rng);

    HashSetup setup;
    setup.key_commitment = std::move(sharing.commitment);
    setup.base = group.hash_to_group(to_bytes("petition-hash"), petition_id);
    setup.key_shares.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i) {
        setup.key_shares.push_back({i + 1, sharing.shares[i], setup.key_commitment});
    }
    return setup;
}

BeaverTriple triple_gen_with_values(const Group& group, std::uint32_t t, std::uint32_t k,
                                    std::uint64_t id, const Scalar& a, const Scalar& b,
                                    RandomSource& rng) {
    if (t == 0 || t > k) throw parameter_error("invalid sharing parameters");
    Scalar c = group.scalar_mul(a, b);
    auto sa = vss::share(group, a, t, k, rng);
    auto sb = vss::share(group, b, t, k, rng);
    auto sc = vss::share(group, c, t, k, rng);
    BeaverTriple triple;
    triple.id = id;
    triple.shares.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i) {
        triple.shares.push_back({sa.shares[i], sb.shares[i], sc.shares[i]});
    }
    return triple;
}

BeaverTriple triple_gen(const Group& group, std::uint32_t t, std::uint32_t k, std::uint64_t id,
                        RandomSource& rng) {
    Scalar a = group.sample_scalar(rng);
    Scalar b = group.sample_scalar(rng);
    return triple_gen_with_values(group, t, k, id, a, b, rng);
}

MaskedOpening open_masks(const Group& group, const vss::ShamirShare& u_share,
                         const vss::ShamirShare& key_share, const TripleShare& triple) {
    if (u_share.index != key_share.index || u_share.index != triple.index() ||
        triple.b.index != triple.index() || triple.c.index != triple.index()) {
        throw protocol_error("mismatched session", "share indices disagree");
    }
    return {u_share.index, group.scalar_sub(u_share.value, triple.a.value),
            group.scalar_sub(key_share.value, triple.b.value)};
}

OpenedMasks combine_openings(const Group& group, std::span<const MaskedOpening> openings,
                             std::uint32_t t) {
    if (openings.size() < t) throw protocol_error("insufficient participants");
    std::vector<vss::ShamirShare> d_shares, e_shares;
    d_shares.reserve(openings.size());
    e_shares.reserve(openings.size());
    for (const auto& o : openings) {
        d_shares.push_back({o.index, o.d});
        e_shares.push_back({o.index, o.e});
    }
    return {vss::reconstruct(group, d_shares, t), vss::reconstruct(group, e_shares, t)};
}

Scalar product_share(const Group& group, const TripleShare& triple, const OpenedMasks& masks) {
    // z_i = c_i + d*b_i + e*a_i + d*e
    Scalar z = triple.c.value;
    z = group.scalar_add(z, group.scalar_mul(masks.d, triple.b.value));
    z = group.scalar_add(z, group.scalar_mul(masks.e, triple.a.value));
    z = group.scalar_add(z, group.scalar_mul(masks.d, masks.e));
    return z;
}

GroupElement dist_hash_eval(const Group& group, const GroupElement& base,
                            std::span<const Participant> participants, std::uint32_t t) {
    if (participants.size() < t) throw protocol_error("insufficient participants");

    std::vector<MaskedOpening> openings;
    openings.reserve(participants.size());
    for (const auto& p : participants) {
        if (p.key_share.share.index != p.u_share.index) {
            throw protocol_error("mismatched session", "share indices disagree");
        }
        openings.push_back(open_masks(group, p.u_share, p.key_share.share, p.triple));
    }
    OpenedMasks masks = combine_openings(group, openings, t);

    std::vector<std::pair<std::uint32_t, GroupElement>> partials;
    partials.reserve(participants.size());
    for (const auto& p : participants) {
        Scalar z = product_share(group, p.triple, masks);
        partials.emplace_back(p.u_share.index, group.exp(base, z));
    }
    return vss::reconstruct_in_exponent(group, partials, t);
}

GroupElement local_hash_oracle(const Group& group, const Scalar& u, const Scalar& hash_key,
                               const GroupElement& base) {
    return group.exp(base, group.scalar_mul(hash_key, u));
}

void TriplePool::provision(BeaverTriple triple) {
    std::uint64_t id = triple.id;
    if (available_.contains(id) ||
        std::find(consumed_.begin(), consumed_.end(), id) != consumed_.end()) {
        throw parameter_error("duplicate triple id");
    }
    available_.emplace(id, std::move(triple));
}

BeaverTriple TriplePool::take_next() {
    if (available_.empty()) throw protocol_error("insufficient triples");
    auto it = available_.begin();
    BeaverTriple triple = std::move(it->second);
    consumed_.push_back(it->first);
    available_.erase(it);
    return triple;
}

BeaverTriple TriplePool::take(std::uint64_t id) {
    auto it = available_.find(id);
    if (it == available_.end()) {
        if (std::find(consumed_.begin(), consumed_.end(), id) != consumed_.end()) {
            throw protocol_error("triple reuse");
        }
        throw protocol_error("insufficient triples");
    }
    BeaverTriple triple = std::move(it->second);
    consumed_.push_back(id);
    available_.erase(it);
    return triple;
}

}  // namespace petition::dhash
