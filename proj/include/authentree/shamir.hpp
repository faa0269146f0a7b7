// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "authentree/crypto.hpp"
#include "authentree/sha256.hpp"

namespace authentree {

namespace gf256 {
// Arithmetic in GF(2^8) with the AES polynomial x^8+x^4+x^3+x+1 (0x11b),
// which fixes byte-exact interoperability of shares.
std::uint8_t mul(std::uint8_t a, std::uint8_t b);
std::uint8_t inv(std::uint8_t a);  // a != 0
inline std::uint8_t add(std::uint8_t a, std::uint8_t b) {
    return static_cast<std::uint8_t>(a ^ b);
}
}  // namespace gf256

/// One integrator's fragment of a secret-shared value. The commitment binds
/// index and payload so corruption is distinguishable from omission.
struct Share {
    std::uint8_t index = 0;  // evaluation point, >= 1, unique per sharing
    Bytes payload;           // same length as the secret
    Digest256 commitment;    // sha256(index || payload)

    /// Wire layout: index (1 octet) || payload || commitment (32 octets).
    Bytes serialize() const;
    static Share deserialize(std::span<const std::uint8_t> wire);
};

/// t-of-n threshold policy. 2 <= t <= n <= 255 (field-size bound).
struct SharingPolicy {
    std::uint8_t n = 0;
    std::uint8_t t = 0;

    void validate() const {
        if (t < 2 || t > n) {
            throw std::invalid_argument("threshold out of range");
        }
    }
};

struct InsufficientSharesError : std::runtime_error {
    InsufficientSharesError() : std::runtime_error("insufficient shares") {}
};

struct CorruptedShareError : std::runtime_error {
    explicit CorruptedShareError(int index)
        : std::runtime_error("corrupted share: index " + std::to_string(index)),
          share_index(index) {}
    int share_index;
};

/// Shamir split, octet-wise over GF(2^8). Shares carry indices 1..n; any t of
/// them reconstruct the secret. Identical rng seeds yield identical shares.
std::vector<Share> split(const Bytes& secret, const SharingPolicy& policy,
                         DetRng& rng);

/// Strict reconstruction: verifies commitments and requires at least t shares
/// with distinct indices. Interpolates the t lowest-index shares. Throws
/// InsufficientSharesError (the DoS-detection signal), CorruptedShareError,
/// or std::invalid_argument ("duplicate share index").
Bytes reconstruct(const std::vector<Share>& shares, const SharingPolicy& policy);

/// Degraded-aggregate reconstruction: no commitment check, so a withheld or
/// corrupted payload (zero-filled / garbage) flows through interpolation.
/// Used by the attack harness to reproduce the Hamming-distance measurement;
/// the protocol engine always uses the strict path.
Bytes reconstruct_degraded(const std::vector<Share>& shares,
                           const SharingPolicy& policy);

/// true iff sha256(index || payload) == commitment.
bool verify_commitment(const Share& share);

/// Recomputes the commitment for (index, payload).
Digest256 share_commitment(std::uint8_t index, const Bytes& payload);

}  // namespace authentree
