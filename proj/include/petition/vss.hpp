#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "petition/group.hpp"

namespace petition::vss {

/// One evaluation point of the sharing polynomial: (index, f(index)).
struct ShamirShare {
    std::uint32_t index = 0;  // party index in [1, k]; never 0
    Scalar value;

    bool operator==(const ShamirShare&) const = default;
};

/// Feldman commitment to the polynomial coefficients: g^{a_0}, ..., g^{a_{t-1}}.
/// coeff_commits[0] is the public commitment to the secret.
struct FeldmanCommitment {
    std::vector<GroupElement> coeff_commits;

    bool operator==(const FeldmanCommitment&) const = default;
};

struct Sharing {
    std::vector<ShamirShare> shares;  // k shares at indices 1..k
    FeldmanCommitment commitment;     // t coefficient commitments
};

/// Degree-(t-1) Shamir sharing of secret among k parties with commitments.
/// Requires 1 <= t <= k < q.
Sharing share(const Group& group, const Scalar& secret, std::uint32_t t, std::uint32_t k,
              RandomSource& rng);

/// Deterministic variant for pinned-value tests: coefficients given
/// explicitly, coeffs[0] is the secret, t = coeffs.size().
Sharing share_from_coefficients(const Group& group, const std::vector<Scalar>& coeffs,
                                std::uint32_t k);

/// True iff g^{share.value} equals the commitment evaluated at share.index.
/// Never throws.
bool verify_share(const Group& group, const ShamirShare& share, const FeldmanCommitment& comm);

/// Interpolation weights at 0: lambda_i = prod_{j != i} x_j / (x_j - x_i).
/// Indices must be distinct and nonzero.
std::vector<Scalar> lagrange_coefficients(const Group& group,
                                          const std::vector<std::uint32_t>& indices);

/// f(0) through the first t shares. Throws "insufficient shares" when fewer
/// than t are given, and "duplicate index" on repeats.
Scalar reconstruct(const Group& group, std::span<const ShamirShare> shares, std::uint32_t t);

/// Same interpolation with exponents hidden in the group: given points
/// (index, base^{f(index)}), returns base^{f(0)}.
GroupElement reconstruct_in_exponent(
    const Group& group, std::span<const std::pair<std::uint32_t, GroupElement>> points,
    std::uint32_t t);

}  // namespace petition::vss
