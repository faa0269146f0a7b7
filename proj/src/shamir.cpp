// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "authentree/shamir.hpp"

#include <algorithm>
#include <array>
#include <cstring>

namespace authentree {

namespace gf256 {
namespace {

constexpr std::uint16_t kPoly = 0x11b;

constexpr std::uint8_t mul_slow(std::uint8_t a, std::uint8_t b) {
    std::uint16_t acc = 0;
    std::uint16_t aa = a;
    for (int i = 0; i < 8; ++i) {
        if (b & 1) acc ^= aa;
        b >>= 1;
        aa <<= 1;
        if (aa & 0x100) aa ^= kPoly;
    }
    return static_cast<std::uint8_t>(acc);
}

// Log/exp tables over generator 3.
struct Tables {
    std::array<std::uint8_t, 256> exp{};
    std::array<std::uint8_t, 256> log{};
};

constexpr Tables build_tables() {
    Tables t{};
    std::uint8_t x = 1;
    for (int i = 0; i < 255; ++i) {
        t.exp[static_cast<std::size_t>(i)] = x;
        t.log[x] = static_cast<std::uint8_t>(i);
        x = mul_slow(x, 3);
    }
    t.exp[255] = t.exp[0];
    return t;
}

constexpr Tables kTables = build_tables();

}  // namespace

std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
    if (a == 0 || b == 0) return 0;
    const int sum = kTables.log[a] + kTables.log[b];
    return kTables.exp[static_cast<std::size_t>(sum % 255)];
}

std::uint8_t inv(std::uint8_t a) {
    if (a == 0) {
        throw std::invalid_argument("zero has no inverse in GF(2^8)");
    }
    return kTables.exp[static_cast<std::size_t>((255 - kTables.log[a]) % 255)];
}

}  // namespace gf256

namespace {

std::uint8_t eval_poly(std::span<const std::uint8_t> coeffs, std::uint8_t x) {
    // Horner, highest coefficient first in the loop.
    std::uint8_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = gf256::add(gf256::mul(acc, x), *it);
    }
    return acc;
}

// Interpolates f(0) per byte over exactly the t lowest-index shares.
Bytes interpolate(std::vector<Share> shares, std::uint8_t t) {
    std::sort(shares.begin(), shares.end(),
              [](const Share& a, const Share& b) { return a.index < b.index; });
    shares.resize(t);

    const std::size_t len = shares.front().payload.size();
    Bytes secret(len, 0);
    for (std::size_t i = 0; i < t; ++i) {
        // Lagrange basis at 0: prod_{j != i} x_j / (x_j + x_i).
        std::uint8_t basis = 1;
        for (std::size_t j = 0; j < t; ++j) {
            if (j == i) continue;
            const std::uint8_t num = shares[j].index;
            const std::uint8_t den =
                gf256::add(shares[j].index, shares[i].index);
            basis = gf256::mul(basis, gf256::mul(num, gf256::inv(den)));
        }
        for (std::size_t b = 0; b < len; ++b) {
            secret[b] = gf256::add(
                secret[b], gf256::mul(basis, shares[i].payload[b]));
        }
    }
    return secret;
}

void check_share_set(const std::vector<Share>& shares,
                     const SharingPolicy& policy) {
    policy.validate();
    std::vector<std::uint8_t> indices;
    indices.reserve(shares.size());
    for (const Share& s : shares) indices.push_back(s.index);
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
        throw std::invalid_argument("duplicate share index");
    }
    if (shares.size() < policy.t) {
        throw InsufficientSharesError();
    }
    const std::size_t len = shares.front().payload.size();
    for (const Share& s : shares) {
        if (s.payload.size() != len) {
            throw std::invalid_argument("share payload lengths differ");
        }
    }
}

}  // namespace

Digest256 share_commitment(std::uint8_t index, const Bytes& payload) {
    Bytes input;
    input.reserve(1 + payload.size());
    input.push_back(index);
    append_bytes(input, payload);
    return sha256(input);
}

bool verify_commitment(const Share& share) {
    return share_commitment(share.index, share.payload) == share.commitment;
}

Bytes Share::serialize() const {
    Bytes wire;
    wire.reserve(1 + payload.size() + 32);
    wire.push_back(index);
    append_bytes(wire, payload);
    append_bytes(wire, commitment.bytes);
    return wire;
}

Share Share::deserialize(std::span<const std::uint8_t> wire) {
    if (wire.size() < 1 + 32) {
        throw std::invalid_argument("share wire record too short");
    }
    Share s;
    s.index = wire[0];
    s.payload.assign(wire.begin() + 1, wire.end() - 32);
    std::memcpy(s.commitment.bytes.data(), wire.data() + wire.size() - 32, 32);
    return s;
}

std::vector<Share> split(const Bytes& secret, const SharingPolicy& policy,
                         DetRng& rng) {
    policy.validate();
    if (secret.empty()) {
        throw std::invalid_argument("secret must be non-empty");
    }

    // One random polynomial per secret byte, constant term = the byte.
    std::vector<Bytes> coeffs(secret.size());
    for (std::size_t b = 0; b < secret.size(); ++b) {
        coeffs[b].reserve(policy.t);
        coeffs[b].push_back(secret[b]);
        for (std::size_t k = 1; k < policy.t; ++k) {
            coeffs[b].push_back(rng.next_byte());
        }
    }

    std::vector<Share> shares(policy.n);
    for (std::uint8_t i = 0; i < policy.n; ++i) {
        Share& s = shares[i];
        s.index = static_cast<std::uint8_t>(i + 1);
        s.payload.resize(secret.size());
        for (std::size_t b = 0; b < secret.size(); ++b) {
            s.payload[b] = eval_poly(coeffs[b], s.index);
        }
        s.commitment = share_commitment(s.index, s.payload);
    }
    return shares;
}

Bytes reconstruct(const std::vector<Share>& shares,
                  const SharingPolicy& policy) {
    check_share_set(shares, policy);
    for (const Share& s : shares) {
        if (!verify_commitment(s)) {
            throw CorruptedShareError(s.index);
        }
    }
    return interpolate(shares, policy.t);
}

Bytes reconstruct_degraded(const std::vector<Share>& shares,
                           const SharingPolicy& policy) {
    check_share_set(shares, policy);
    return interpolate(shares, policy.t);
}

}  // namespace authentree
