#include "petition/vss.hpp"

#include <set>

#include "petition/errors.hpp"

namespace petition::vss {

namespace {

Scalar eval_poly(const Group& group, const std::vector<Scalar>& coeffs, std::uint32_t x) {
    // Horner evaluation mod q.
    Scalar acc = group.scalar_from_u64(0);
    Scalar point = group.scalar_from_u64(x);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = group.scalar_add(group.scalar_mul(acc, point), *it);
    }
    return acc;
}

void check_distinct_indices(std::span<const std::uint32_t> indices) {
    std::set<std::uint32_t> seen;
    for (std::uint32_t i : indices) {
        if (i == 0) throw parameter_error("invalid share index", "index 0");
        if (!seen.insert(i).second) throw parameter_error("duplicate index");
    }
}

}  // namespace

Sharing share_from_coefficients(const Group& group, const std::vector<Scalar>& coeffs,
                                std::uint32_t k) {
    const auto t = static_cast<std::uint32_t>(coeffs.size());
    if (t == 0 || t > k || Int(k) >= group.order()) {
        throw parameter_error("invalid sharing parameters");
    }
    Sharing out;
    out.shares.reserve(k);
    for (std::uint32_t i = 1; i <= k; ++i) {
        out.shares.push_back({i, eval_poly(group, coeffs, i)});
    }
    out.commitment.coeff_commits.reserve(t);
    for (const Scalar& a : coeffs) {
        out.commitment.coeff_commits.push_back(group.exp_g(a));
    }
    return out;
}

Sharing share(const Group& group, const Scalar& secret, std::uint32_t t, std::uint32_t k,
              RandomSource& rng) {
    if (t == 0 || t > k || Int(k) >= group.order()) {
        throw parameter_error("invalid sharing parameters");
    }
    std::vector<Scalar> coeffs;
    coeffs.reserve(t);
    coeffs.push_back(secret);
    for (std::uint32_t i = 1; i < t; ++i) coeffs.push_back(group.sample_scalar(rng));
    return share_from_coefficients(group, coeffs, k);
}

bool verify_share(const Group& group, const ShamirShare& share, const FeldmanCommitment& comm) {
    if (share.index == 0 || comm.coeff_commits.empty()) return false;
    // prod_l C_l^{index^l} must equal g^{share.value}.
    GroupElement expected = group.identity();
    Scalar point = group.scalar_from_u64(share.index);
    Scalar power = group.scalar_from_u64(1);
    for (const GroupElement& c : comm.coeff_commits) {
        expected = group.mul(expected, group.exp(c, power));
        power = group.scalar_mul(power, point);
    }
    return expected == group.exp_g(share.value);
}

std::vector<Scalar> lagrange_coefficients(const Group& group,
                                          const std::vector<std::uint32_t>& indices) {
    if (indices.empty()) throw parameter_error("invalid sharing parameters", "no indices");
    check_distinct_indices(indices);
    std::vector<Scalar> out;
    out.reserve(indices.size());
    for (std::uint32_t i : indices) {
        Scalar num = group.scalar_from_u64(1);
        Scalar den = group.scalar_from_u64(1);
        for (std::uint32_t j : indices) {
            if (j == i) continue;
            num = group.scalar_mul(num, group.scalar_from_u64(j));
            den = group.scalar_mul(
                den, group.scalar_sub(group.scalar_from_u64(j), group.scalar_from_u64(i)));
        }
        out.push_back(group.scalar_mul(num, group.scalar_inv(den)));
    }
    return out;
}

Scalar reconstruct(const Group& group, std::span<const ShamirShare> shares, std::uint32_t t) {
    if (t == 0) throw parameter_error("invalid sharing parameters");
    if (shares.size() < t) throw protocol_error("insufficient shares");
    std::vector<std::uint32_t> indices;
    indices.reserve(shares.size());
    for (const auto& s : shares) indices.push_back(s.index);
    check_distinct_indices(indices);
    indices.resize(t);

    auto lambda = lagrange_coefficients(group, indices);
    Scalar acc = group.scalar_from_u64(0);
    for (std::uint32_t i = 0; i < t; ++i) {
        acc = group.scalar_add(acc, group.scalar_mul(lambda[i], shares[i].value));
    }
    return acc;
}

GroupElement reconstruct_in_exponent(
    const Group& group, std::span<const std::pair<std::uint32_t, GroupElement>> points,
    std::uint32_t t) {
    if (t == 0) throw parameter_error("invalid sharing parameters");
    if (points.size() < t) throw protocol_error("insufficient shares");
    std::vector<std::uint32_t> indices;
    indices.reserve(points.size());
    for (const auto& p : points) indices.push_back(p.first);
    check_distinct_indices(indices);
    indices.resize(t);

    auto lambda = lagrange_coefficients(group, indices);
    GroupElement acc = group.identity();
    for (std::uint32_t i = 0; i < t; ++i) {
        acc = group.mul(acc, group.exp(points[i].second, lambda[i]));
    }
    return acc;
}

}  // namespace petition::vss
