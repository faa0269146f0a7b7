// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include <doctest.h>

#include <algorithm>
#include <set>

#include "authentree/shamir.hpp"
#include "test_util.hpp"

using namespace authentree;
using authentree::test::ascii;

namespace {

// Enumerates all k-subsets of [0, n) into `out`.
void subsets_of(std::size_t n, std::size_t k,
                std::vector<std::vector<std::size_t>>& out) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < n; ++i) {
            if (pick[i]) subset.push_back(i);
        }
        out.push_back(std::move(subset));
    } while (std::prev_permutation(pick.begin(), pick.end()));
}

}  // namespace

TEST_CASE("GF(2^8) arithmetic sanity") {
    // a * inv(a) == 1 for every nonzero a.
    for (int a = 1; a < 256; ++a) {
        const auto byte = static_cast<std::uint8_t>(a);
        CHECK(gf256::mul(byte, gf256::inv(byte)) == 1);
    }
    // Known AES-field product: 0x57 * 0x83 = 0xc1.
    CHECK(gf256::mul(0x57, 0x83) == 0xc1);
    CHECK(gf256::mul(0, 0x42) == 0);
}

TEST_CASE("full-set reconstruction round trip (3-of-3)") {
    DetRng rng(1);
    const Bytes secret = ascii("interposer secret");
    const SharingPolicy policy{3, 3};
    const auto shares = split(secret, policy, rng);
    REQUIRE(shares.size() == 3);
    CHECK(reconstruct(shares, policy) == secret);
}

TEST_CASE("every 3-subset of a 3-of-5 sharing reconstructs (brute force)") {
    DetRng rng(2);
    const Bytes secret = ascii("quorum material!");
    const SharingPolicy policy{5, 3};
    const auto shares = split(secret, policy, rng);

    std::vector<std::vector<std::size_t>> subsets;
    subsets_of(5, 3, subsets);
    CHECK(subsets.size() == 10);
    for (const auto& subset : subsets) {
        std::vector<Share> picked;
        for (std::size_t i : subset) picked.push_back(shares[i]);
        CHECK(reconstruct(picked, policy) == secret);
    }
}

TEST_CASE("two shares of a 3-of-5 sharing reveal nothing usable") {
    // Treating 2 shares as a t=2 interpolation never lands on the secret.
    DetRng rng(3);
    int matches = 0;
    for (int run = 0; run < 1000; ++run) {
        const Bytes secret = rng.bytes(16);
        const auto shares = split(secret, SharingPolicy{5, 3}, rng);
        const std::vector<Share> two{shares[0], shares[1]};
        if (reconstruct_degraded(two, SharingPolicy{5, 2}) == secret) ++matches;
    }
    CHECK(matches == 0);
}

TEST_CASE("exhaustive threshold correctness for 2 <= t <= n <= 8") {
    DetRng rng(4);
    for (std::uint8_t n = 2; n <= 8; ++n) {
        for (std::uint8_t t = 2; t <= n; ++t) {
            const Bytes secret = rng.bytes(32);
            const SharingPolicy policy{n, t};
            const auto shares = split(secret, policy, rng);
            std::vector<std::vector<std::size_t>> subsets;
            subsets_of(n, t, subsets);
            for (const auto& subset : subsets) {
                std::vector<Share> picked;
                for (std::size_t i : subset) picked.push_back(shares[i]);
                REQUIRE(reconstruct(picked, policy) == secret);
            }
        }
    }
}

TEST_CASE("privacy: one share of a 2-of-n sharing is a perfect blind") {
    // Desk-scale enumeration: fix the first share of a 1-octet secret and
    // interpolate against all 256 candidate second shares; every candidate
    // secret value appears exactly once.
    DetRng rng(5);
    const Bytes secret{0xa7};
    const auto shares = split(secret, SharingPolicy{2, 2}, rng);
    std::multiset<std::uint8_t> candidates;
    for (int y = 0; y < 256; ++y) {
        Share candidate;
        candidate.index = 2;
        candidate.payload = Bytes{static_cast<std::uint8_t>(y)};
        const Bytes value = reconstruct_degraded({shares[0], candidate},
                                                 SharingPolicy{2, 2});
        candidates.insert(value[0]);
    }
    for (int v = 0; v < 256; ++v) {
        CHECK(candidates.count(static_cast<std::uint8_t>(v)) == 1);
    }
}

TEST_CASE("reconstruction is deterministic and uses the t lowest indices") {
    DetRng rng(6);
    const Bytes secret = rng.bytes(32);
    const SharingPolicy policy{5, 3};
    auto shares = split(secret, policy, rng);
    // Extra shares beyond t are ignored after index sort.
    std::reverse(shares.begin(), shares.end());
    CHECK(reconstruct(shares, policy) == secret);
}

TEST_CASE("same rng seed yields identical shares") {
    const Bytes secret = ascii("determinism");
    DetRng a(77), b(77);
    const auto sa = split(secret, SharingPolicy{4, 3}, a);
    const auto sb = split(secret, SharingPolicy{4, 3}, b);
    REQUIRE(sa.size() == sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i) {
        CHECK(sa[i].payload == sb[i].payload);
        CHECK(sa[i].commitment == sb[i].commitment);
    }
}

TEST_CASE("commitment verification") {
    DetRng rng(8);
    auto shares = split(ascii("commit me"), SharingPolicy{3, 2}, rng);
    CHECK(verify_commitment(shares[0]));

    Share altered_payload = shares[0];
    altered_payload.payload[0] ^= 0x01;
    CHECK_FALSE(verify_commitment(altered_payload));

    Share altered_index = shares[0];
    altered_index.index = 9;
    CHECK_FALSE(verify_commitment(altered_index));
}

TEST_CASE("reconstruction error paths carry the pinned messages") {
    DetRng rng(9);
    const Bytes secret = ascii("error paths");
    const SharingPolicy policy{4, 3};
    auto shares = split(secret, policy, rng);

    SUBCASE("insufficient shares") {
        const std::vector<Share> two{shares[0], shares[1]};
        CHECK_THROWS_WITH_AS(reconstruct(two, policy), "insufficient shares",
                             InsufficientSharesError);
    }
    SUBCASE("corrupted share names the index") {
        shares[1].payload = flip_bits(shares[1].payload,
                                      std::vector<std::size_t>{0});
        CHECK_THROWS_WITH_AS(reconstruct(shares, policy),
                             "corrupted share: index 2", CorruptedShareError);
    }
    SUBCASE("duplicate share index") {
        shares[1] = shares[0];
        CHECK_THROWS_WITH_AS(reconstruct(shares, policy),
                             "duplicate share index", std::invalid_argument);
    }
    SUBCASE("threshold out of range") {
        DetRng r(1);
        CHECK_THROWS_WITH_AS(split(secret, SharingPolicy{4, 1}, r),
                             "threshold out of range", std::invalid_argument);
        CHECK_THROWS_WITH_AS(split(secret, SharingPolicy{4, 5}, r),
                             "threshold out of range", std::invalid_argument);
    }
}

TEST_CASE("share wire layout round trip") {
    DetRng rng(10);
    const auto shares = split(rng.bytes(32), SharingPolicy{3, 2}, rng);
    for (const Share& share : shares) {
        const Bytes wire = share.serialize();
        CHECK(wire.size() == 1 + 32 + 32);
        const Share back = Share::deserialize(wire);
        CHECK(back.index == share.index);
        CHECK(back.payload == share.payload);
        CHECK(back.commitment == share.commitment);
    }
}
