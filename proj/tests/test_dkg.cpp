#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "petition/dkg.hpp"
#include "petition/elgamal.hpp"
#include "petition/errors.hpp"

using namespace petition;
using namespace petition::dkg;

namespace {

std::uint64_t oracle_modpow(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r = r * base % m;
    return r;
}

/// Builds a full toy ceremony from forced secrets[j-1][i-1] = x_{i,j}.
CeremonyResult forced_ceremony(const Group& g, const std::vector<std::vector<std::uint64_t>>& secrets,
                               std::uint32_t t, RandomSource& rng) {
    auto n = static_cast<std::uint32_t>(secrets.size());
    auto k = static_cast<std::uint32_t>(secrets[0].size());
    CeremonyResult result;
    result.commitments.assign(n, {});
    result.stores.resize(k);
    for (std::uint32_t i = 0; i < k; ++i) {
        result.stores[i].rabbit = i + 1;
        result.stores[i].received.assign(n, std::vector<vss::ShamirShare>(k));
    }
    for (std::uint32_t j = 1; j <= n; ++j) {
        for (std::uint32_t i = 1; i <= k; ++i) {
            auto c = contribute_with_secret(g, i, j, g.scalar_from_u64(secrets[j - 1][i - 1]), t,
                                            k, rng);
            for (std::uint32_t r = 1; r <= k; ++r) {
                result.stores[r - 1].received[j - 1][i - 1] = c.outgoing_shares[r - 1];
            }
            result.commitments[j - 1].push_back(c.commitment);
        }
    }
    result.pk = aggregate_public(g, result.commitments, k, n);
    return result;
}

/// Share sets for fragment j drawn from a subset of rabbit stores.
std::vector<std::vector<vss::ShamirShare>> fragment_share_sets(
    const CeremonyResult& ceremony, std::uint32_t j, const std::vector<std::uint32_t>& rabbits) {
    std::uint32_t k = static_cast<std::uint32_t>(ceremony.stores.size());
    std::vector<std::vector<vss::ShamirShare>> sets(k);
    for (std::uint32_t i = 0; i < k; ++i) {
        for (std::uint32_t r : rabbits) {
            sets[i].push_back(ceremony.stores[r - 1].received[j - 1][i]);
        }
    }
    return sets;
}

}  // namespace

TEST_CASE("contribution is well-formed and replay-deterministic") {
    auto g = make_group("toy");

    RandomSource a(42), b(42);
    auto c1 = contribute(*g, 2, 1, 2, 3, a);
    auto c2 = contribute(*g, 2, 1, 2, 3, b);
    CHECK(c1.secret == c2.secret);
    CHECK(c1.commitment == c2.commitment);
    CHECK(c1.outgoing_shares == c2.outgoing_shares);

    for (const auto& sh : c1.outgoing_shares) {
        CHECK(vss::verify_share(*g, sh, c1.commitment));
    }

    // Forced secret x = 4: commitment head is 2^4 mod 23 = 16.
    RandomSource rng(1);
    auto forced = contribute_with_secret(*g, 1, 1, g->scalar_from_u64(4), 2, 3, rng);
    CHECK(oracle_modpow(2, 4, 23) == 16);
    CHECK(forced.commitment.coeff_commits[0].encoding == Bytes{16});
}

TEST_CASE("aggregate_public on the pinned 2x2 ceremony") {
    auto g = make_group("toy");
    RandomSource rng(5);

    // x_{1,1}=1, x_{2,1}=2, x_{1,2}=3, x_{2,2}=4.
    auto ceremony = forced_ceremony(*g, {{1, 2}, {3, 4}}, 2, rng);

    // Sum-then-exponentiate oracle: F_1 = g^3, F_2 = g^7, p = g^10.
    CHECK(ceremony.pk.fragment_publics[0].encoding == Bytes{static_cast<std::uint8_t>(oracle_modpow(2, 3, 23))});
    CHECK(ceremony.pk.fragment_publics[1].encoding == Bytes{static_cast<std::uint8_t>(oracle_modpow(2, 7, 23))});
    CHECK(ceremony.pk.p.encoding == Bytes{static_cast<std::uint8_t>(oracle_modpow(2, 10, 23))});

    SUBCASE("reconstruct_fragment(1) yields 3 from any t-subset") {
        auto s12 = fragment_share_sets(ceremony, 1, {1, 2});
        auto f = reconstruct_fragment(*g, 1, s12, 2, ceremony.pk.fragment_publics[0]);
        CHECK(f.value == g->scalar_from_u64(3));

        // k = 2 here, so the only other t-subset ordering is {2,1}.
        auto s21 = fragment_share_sets(ceremony, 1, {2, 1});
        CHECK(reconstruct_fragment(*g, 1, s21, 2, ceremony.pk.fragment_publics[0]).value ==
              g->scalar_from_u64(3));
    }
    SUBCASE("t-1 shares are insufficient") {
        auto sets = fragment_share_sets(ceremony, 1, {1});
        CHECK_THROWS_WITH_AS(
            reconstruct_fragment(*g, 1, sets, 2, ceremony.pk.fragment_publics[0]),
            "insufficient shares", Error);
    }
    SUBCASE("tampered reconstruction is caught before release") {
        auto sets = fragment_share_sets(ceremony, 1, {1, 2});
        sets[0][0].value = g->scalar_add(sets[0][0].value, g->scalar_from_u64(1));
        CHECK_THROWS_WITH_AS(
            reconstruct_fragment(*g, 1, sets, 2, ceremony.pk.fragment_publics[0]),
            "fragment verification failed", Error);
    }
}

TEST_CASE("degenerate all-zero ceremony is rejected") {
    auto g = make_group("toy");
    RandomSource rng(9);
    CHECK_THROWS_WITH_AS(forced_ceremony(*g, {{0}}, 1, rng), "degenerate key", Error);
}

TEST_CASE("incomplete grids are rejected") {
    auto g = make_group("toy");
    RandomSource rng(10);
    auto ceremony = run_ceremony(*g, 2, 2, 2, rng);
    auto grid = ceremony.commitments;
    grid[1].pop_back();
    CHECK_THROWS_WITH_AS(aggregate_public(*g, grid, 2, 2), "incomplete ceremony", Error);
}

TEST_CASE("p equals g^(sum of all secrets) over random ceremonies") {
    RandomSource rng(123);
    for (const char* backend : {"toy", "p256"}) {
        auto g = make_group(backend);
        int runs = std::string(backend) == "toy" ? 100 : 20;
        for (int run = 0; run < runs; ++run) {
            std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.uniform_u64(3));
            std::uint32_t k = 2 + static_cast<std::uint32_t>(rng.uniform_u64(3));
            std::uint32_t t = 1 + static_cast<std::uint32_t>(rng.uniform_u64(k));

            CeremonyResult ceremony;
            try {
                ceremony = run_ceremony(*g, n, k, t, rng);
            } catch (const Error& e) {
                // The toy field occasionally sums to the zero key; that must
                // surface as the degenerate-key rejection, nothing else.
                CHECK(e.code() == "degenerate key");
                continue;
            }

            // Cross-oracle: reconstruct every fragment from shares and
            // compare the exponent route.
            Scalar total = g->scalar_from_u64(0);
            for (std::uint32_t j = 1; j <= n; ++j) {
                std::vector<std::uint32_t> quorum;
                for (std::uint32_t r = 1; r <= t; ++r) quorum.push_back(r);
                auto sets = fragment_share_sets(ceremony, j, quorum);
                auto frag = reconstruct_fragment(*g, j, sets, t,
                                                 ceremony.pk.fragment_publics[j - 1]);
                CHECK(g->exp_g(frag.value) == ceremony.pk.fragment_publics[j - 1]);
                total = g->scalar_add(total, frag.value);
            }
            CHECK(g->exp_g(total) == ceremony.pk.p);

            // The aggregated key encrypts/decrypts round trip under s.
            GroupElement m = g->exp_g(g->sample_scalar(rng));
            CHECK(elgamal::decrypt(*g, total, elgamal::encrypt(*g, ceremony.pk.p, m, rng)) == m);
        }
    }
}

TEST_CASE("fragment reconstruction is order-independent") {
    auto g = make_group("toy");
    RandomSource rng(56);
    auto ceremony = run_ceremony(*g, 3, 3, 2, rng);

    std::vector<Scalar> forward, backward;
    for (std::uint32_t j = 1; j <= 3; ++j) {
        auto sets = fragment_share_sets(ceremony, j, {1, 2});
        forward.push_back(
            reconstruct_fragment(*g, j, sets, 2, ceremony.pk.fragment_publics[j - 1]).value);
    }
    for (std::uint32_t j = 3; j >= 1; --j) {
        auto sets = fragment_share_sets(ceremony, j, {2, 3});
        backward.push_back(
            reconstruct_fragment(*g, j, sets, 2, ceremony.pk.fragment_publics[j - 1]).value);
    }
    std::reverse(backward.begin(), backward.end());
    CHECK(forward == backward);
}

TEST_CASE("fewer than t colluding rabbits cannot pin down an honest secret") {
    auto g = make_group("toy");
    RandomSource rng(77);
    auto ceremony = run_ceremony(*g, 1, 3, 2, rng);

    // Coalition = rabbit 1 alone (t-1 = 1). Its pooled view of contribution
    // (2,1) is a single share; reconstruction errors out.
    auto pooled = fragment_share_sets(ceremony, 1, {1});
    CHECK_THROWS_WITH_AS(
        reconstruct_fragment(*g, 1, pooled, 2, ceremony.pk.fragment_publics[0]),
        "insufficient shares", Error);

    // Exhaustive attack replay over the toy field: enumerate all degree-1
    // polynomials and keep those matching the coalition's observed share of
    // contribution (2,1). More than one candidate secret must survive.
    vss::ShamirShare coalition_share = ceremony.stores[0].received[0][1];
    std::set<Int> candidates;
    for (std::uint64_t a0 = 0; a0 < 11; ++a0) {
        for (std::uint64_t a1 = 0; a1 < 11; ++a1) {
            Scalar at_index = g->scalar_from_u64((a0 + a1 * coalition_share.index) % 11);
            if (at_index == coalition_share.value) candidates.insert(Int(a0));
        }
    }
    CHECK(candidates.size() == 11);
}

TEST_CASE("verify_ceremony") {
    auto g = make_group("toy");
    RandomSource rng(31);
    auto ceremony = run_ceremony(*g, 2, 3, 2, rng);

    SUBCASE("honest ceremony verifies") {
        auto d = verify_ceremony(*g, ceremony.commitments, ceremony.pk, 3, 2, 2);
        CHECK(d.ok);
        CHECK(d.failures.empty());
    }
    SUBCASE("forged public key with known secret is detected") {
        auto forged = ceremony.pk;
        Scalar known = g->scalar_from_u64(6);
        forged.p = g->exp_g(known);
        auto d = verify_ceremony(*g, ceremony.commitments, forged, 3, 2, 2);
        CHECK_FALSE(d.ok);
    }
    SUBCASE("one altered fragment public is detected") {
        auto forged = ceremony.pk;
        forged.fragment_publics[1] = g->mul(forged.fragment_publics[1], g->generator());
        auto d = verify_ceremony(*g, ceremony.commitments, forged, 3, 2, 2);
        CHECK_FALSE(d.ok);
    }
    SUBCASE("missing contribution is detected") {
        auto grid = ceremony.commitments;
        grid[0].pop_back();
        auto d = verify_ceremony(*g, grid, ceremony.pk, 3, 2, 2);
        CHECK_FALSE(d.ok);
    }
}

TEST_CASE("bad shares abort the ceremony with attribution") {
    auto g = make_group("toy");
    RandomSource rng(91);
    CeremonyFaults faults;
    faults.bad_share_from = 2;
    try {
        run_ceremony(*g, 2, 3, 2, rng, faults);
        FAIL("expected abort");
    } catch (const Error& e) {
        CHECK(e.code() == "ceremony aborted");
        CHECK(std::string(e.what()).find("rabbit 2") != std::string::npos);
    }
}
