#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <vector>

#include "petition/errors.hpp"
#include "petition/vss.hpp"

using namespace petition;
using namespace petition::vss;

namespace {

// Independent oracle: evaluate f(x) = sum a_l x^l mod q by plain arithmetic.
std::uint64_t oracle_poly_eval(const std::vector<std::uint64_t>& coeffs, std::uint64_t x,
                               std::uint64_t q) {
    std::uint64_t acc = 0;
    std::uint64_t pow = 1;
    for (std::uint64_t a : coeffs) {
        acc = (acc + a * pow) % q;
        pow = pow * x % q;
    }
    return acc;
}

std::uint64_t oracle_modinv(std::uint64_t a, std::uint64_t q) {
    a %= q;
    for (std::uint64_t x = 1; x < q; ++x) {
        if (a * x % q == 1) return x;
    }
    return 0;
}

std::vector<Scalar> toy_scalars(const Group& g, std::initializer_list<std::uint64_t> vs) {
    std::vector<Scalar> out;
    for (auto v : vs) out.push_back(g.scalar_from_u64(v));
    return out;
}

}  // namespace

TEST_CASE("pinned sharing of 5 with coefficients (5,3) mod 11") {
    auto g = make_group("toy");

    // Oracle: f(x) = 5 + 3x mod 11 at x = 1,2,3.
    CHECK(oracle_poly_eval({5, 3}, 1, 11) == 8);
    CHECK(oracle_poly_eval({5, 3}, 2, 11) == 0);
    CHECK(oracle_poly_eval({5, 3}, 3, 11) == 3);

    Sharing s = share_from_coefficients(*g, toy_scalars(*g, {5, 3}), 3);
    REQUIRE(s.shares.size() == 3);
    CHECK(s.shares[0] == ShamirShare{1, g->scalar_from_u64(8)});
    CHECK(s.shares[1] == ShamirShare{2, g->scalar_from_u64(0)});
    CHECK(s.shares[2] == ShamirShare{3, g->scalar_from_u64(3)});

    CHECK(s.commitment.coeff_commits.size() == 2);
    CHECK(s.commitment.coeff_commits[0] == g->exp_g(g->scalar_from_u64(5)));

    for (const auto& sh : s.shares) CHECK(verify_share(*g, sh, s.commitment));
}

TEST_CASE("threshold 1 gives constant shares") {
    auto g = make_group("toy");
    RandomSource rng(3);
    Scalar secret = g->scalar_from_u64(9);
    Sharing s = share(*g, secret, 1, 4, rng);
    for (const auto& sh : s.shares) CHECK(sh.value == secret);
    CHECK(s.commitment.coeff_commits.size() == 1);
}

TEST_CASE("parameter validation") {
    auto g = make_group("toy");
    RandomSource rng(4);
    CHECK_THROWS_AS(share(*g, g->scalar_from_u64(1), 4, 3, rng), Error);   // t > k
    CHECK_THROWS_AS(share(*g, g->scalar_from_u64(1), 2, 11, rng), Error);  // k >= q
    CHECK_THROWS_AS(share(*g, g->scalar_from_u64(1), 0, 3, rng), Error);
}

TEST_CASE("verify_share rejects tampering") {
    auto g = make_group("toy");
    RandomSource rng(8);
    Sharing s = share(*g, g->scalar_from_u64(5), 2, 3, rng);

    SUBCASE("value bump") {
        auto bad = s.shares[0];
        bad.value = g->scalar_add(bad.value, g->scalar_from_u64(1));
        CHECK_FALSE(verify_share(*g, bad, s.commitment));
    }
    SUBCASE("every single-bit corruption is caught") {
        for (const auto& sh : s.shares) {
            Bytes enc = g->scalar_encode(sh.value);
            for (int bit = 0; bit < 8; ++bit) {
                Bytes flipped = enc;
                flipped[0] ^= static_cast<std::uint8_t>(1 << bit);
                bool decodable = true;
                Scalar v;
                try {
                    v = g->scalar_decode(flipped);
                } catch (const Error&) {
                    decodable = false;  // out-of-range encodings are rejected outright
                }
                if (decodable) CHECK_FALSE(verify_share(*g, {sh.index, v}, s.commitment));
            }
        }
    }
    SUBCASE("swapped indices fail across exhaustive toy trials") {
        // Over all toy sharings with distinct share values, swapping two
        // honest shares' indices must never verify.
        for (std::uint64_t secret = 0; secret < 11; ++secret) {
            for (std::uint64_t a1 = 1; a1 < 11; ++a1) {
                Sharing trial = share_from_coefficients(
                    *g, toy_scalars(*g, {secret, a1}), 3);
                ShamirShare x = trial.shares[0];
                ShamirShare y = trial.shares[1];
                std::swap(x.index, y.index);
                CHECK_FALSE(verify_share(*g, x, trial.commitment));
                CHECK_FALSE(verify_share(*g, y, trial.commitment));
            }
        }
    }
}

TEST_CASE("lagrange coefficients") {
    auto g = make_group("toy");

    CHECK(lagrange_coefficients(*g, {4}) == toy_scalars(*g, {1}));

    // Direct formula oracle for indices (1,3) mod 11:
    //   lambda_1 = 3 * (3-1)^-1, lambda_2 = 1 * (1-3)^-1.
    std::uint64_t l1 = 3 * oracle_modinv(2, 11) % 11;
    std::uint64_t l2 = 1 * oracle_modinv(11 - 2, 11) % 11;
    CHECK(l1 == 7);
    CHECK(l2 == 5);
    CHECK(lagrange_coefficients(*g, {1, 3}) == toy_scalars(*g, {l1, l2}));

    // Sum lambda_i f(x_i) over shares (1,8),(3,3) recovers the secret 5.
    CHECK((7 * 8 + 5 * 3) % 11 == 5);

    CHECK_THROWS_WITH_AS(lagrange_coefficients(*g, {2, 2}), "duplicate index", Error);
    CHECK_THROWS_AS(lagrange_coefficients(*g, {0, 1}), Error);
}

TEST_CASE("reconstruction") {
    auto g = make_group("toy");

    std::array<ShamirShare, 2> pinned{ShamirShare{1, g->scalar_from_u64(8)},
                                      ShamirShare{3, g->scalar_from_u64(3)}};
    CHECK(reconstruct(*g, pinned, 2) == g->scalar_from_u64(5));

    SUBCASE("completeness over random sharings") {
        RandomSource rng(12);
        for (int trial = 0; trial < 500; ++trial) {
            Scalar secret = g->sample_scalar(rng);
            std::uint32_t k = 2 + static_cast<std::uint32_t>(rng.uniform_u64(5));
            std::uint32_t t = 1 + static_cast<std::uint32_t>(rng.uniform_u64(k));
            Sharing s = share(*g, secret, t, k, rng);
            CHECK(reconstruct(*g, s.shares, t) == secret);
        }
    }
    SUBCASE("insufficient shares") {
        std::array<ShamirShare, 1> one{ShamirShare{1, g->scalar_from_u64(8)}};
        CHECK_THROWS_WITH_AS(reconstruct(*g, one, 2), "insufficient shares", Error);
    }
    SUBCASE("every t-subset reconstructs (exhaustive)") {
        RandomSource rng(13);
        Scalar secret = g->scalar_from_u64(6);
        Sharing s = share(*g, secret, 3, 5, rng);
        for (std::uint32_t a = 0; a < 5; ++a) {
            for (std::uint32_t b = a + 1; b < 5; ++b) {
                for (std::uint32_t c = b + 1; c < 5; ++c) {
                    std::array<ShamirShare, 3> subset{s.shares[a], s.shares[b], s.shares[c]};
                    CHECK(reconstruct(*g, subset, 3) == secret);
                }
            }
        }
    }
}

TEST_CASE("reconstruction in the exponent") {
    auto g = make_group("toy");

    // Points built from the pinned sharing of 5.
    std::vector<std::pair<std::uint32_t, GroupElement>> points{
        {1, g->exp_g(g->scalar_from_u64(8))}, {3, g->exp_g(g->scalar_from_u64(3))}};
    CHECK(reconstruct_in_exponent(*g, points, 2) == g->exp_g(g->scalar_from_u64(5)));

    SUBCASE("single point with t = 1") {
        std::vector<std::pair<std::uint32_t, GroupElement>> one{
            {2, g->exp_g(g->scalar_from_u64(7))}};
        CHECK(reconstruct_in_exponent(*g, one, 1) == one[0].second);
    }
    SUBCASE("agrees with clear reconstruction on random instances") {
        RandomSource rng(14);
        for (int trial = 0; trial < 200; ++trial) {
            Scalar secret = g->sample_scalar(rng);
            std::uint32_t k = 2 + static_cast<std::uint32_t>(rng.uniform_u64(4));
            std::uint32_t t = 1 + static_cast<std::uint32_t>(rng.uniform_u64(k));
            Sharing s = share(*g, secret, t, k, rng);
            std::vector<std::pair<std::uint32_t, GroupElement>> pts;
            for (const auto& sh : s.shares) pts.emplace_back(sh.index, g->exp_g(sh.value));
            CHECK(reconstruct_in_exponent(*g, pts, t) == g->exp_g(reconstruct(*g, s.shares, t)));
        }
    }
}

TEST_CASE("t-1 shares reveal nothing: frequency check over the toy field") {
    auto g = make_group("toy");
    RandomSource rng(1234);
    Scalar secret = g->scalar_from_u64(5);

    // For fixed secret, the share at index 1 of a t=2 sharing must be
    // uniform over Z_11. Chi-squared with df=10; 29.6 is the 0.1% cutoff.
    std::array<int, 11> counts{};
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        Sharing s = share(*g, secret, 2, 3, rng);
        counts[static_cast<std::size_t>(s.shares[0].value.v)]++;
    }
    double expected = trials / 11.0;
    double chi2 = 0;
    for (int c : counts) {
        double d = c - expected;
        chi2 += d * d / expected;
    }
    CHECK(chi2 < 29.6);
}

TEST_CASE("vss works identically over p256") {
    auto g = make_group("p256");
    RandomSource rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        Scalar secret = g->sample_scalar(rng);
        Sharing s = share(*g, secret, 3, 5, rng);
        for (const auto& sh : s.shares) CHECK(verify_share(*g, sh, s.commitment));
        CHECK(reconstruct(*g, s.shares, 3) == secret);
        CHECK(s.commitment.coeff_commits[0] == g->exp_g(secret));
    }
}
