// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "authentree/bytes.hpp"
#include "authentree/sha256.hpp"

namespace authentree {

/// Raw chiplet signature. Length is tracked in bits because the experiments
/// sweep it; when bit_length is not a multiple of 8 the trailing bits of the
/// last octet are zero.
struct Signature {
    Bytes bytes;
    std::size_t bit_length = 0;

    bool operator==(const Signature&) const = default;

    static Signature from_bytes(Bytes b) {
        Signature s;
        s.bit_length = b.size() * 8;
        s.bytes = std::move(b);
        return s;
    }
};

/// Per-session binding material. Nonces are derived from a counter-mixed
/// generator, so no two sessions of one run can share a nonce.
struct SessionContext {
    std::uint64_t session_id = 0;
    std::array<std::uint8_t, 16> nonce{};

    bool operator==(const SessionContext&) const = default;
};

/// Issues SessionContexts with strictly increasing session ids. The nonce is
/// the first 16 octets of sha256("authentree.nonce" || seed || session_id).
class SessionSource {
public:
    explicit SessionSource(std::uint64_t seed) : seed_(seed) {}

    SessionContext next();
    static SessionContext at(std::uint64_t seed, std::uint64_t session_id);

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t next_id_ = 1;
};

/// sha256(sig.bytes || nonce || be64(session_id) || be64(target_id)).
/// The fixed layout makes transcripts bit-exact across implementations.
Digest256 session_digest(const Signature& sig, const SessionContext& ctx,
                         std::uint64_t target_id);

/// Number of bit positions where two digests differ, in [0, 256].
int hamming_distance(const Digest256& a, const Digest256& b);

/// Returns a copy of `data` with exactly the given bits inverted. Bit 0 is
/// the most significant bit of octet 0. Throws std::out_of_range
/// ("bit index exceeds data length") and std::invalid_argument
/// ("duplicate flip position").
Bytes flip_bits(std::span<const std::uint8_t> data,
                std::span<const std::size_t> positions);

/// Derives an independent sub-seed, e.g. one per attack trial:
/// first 8 octets (big-endian) of sha256("authentree.derive" || seed || index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Seedable deterministic generator used for share polynomials, PUF secrets
/// and attack trial randomness. mt19937_64 output is pinned by the standard,
/// so runs are byte-reproducible across platforms.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    std::uint8_t next_byte() { return static_cast<std::uint8_t>(next_u64() & 0xff); }

    /// Uniform in [0, bound); bound must be nonzero. Rejection-sampled, so the
    /// distribution is exact.
    std::uint64_t below(std::uint64_t bound);

    Bytes bytes(std::size_t count);

    /// k distinct bit positions drawn from [0, total), ascending order.
    std::vector<std::size_t> distinct_positions(std::size_t k, std::size_t total);

private:
    std::mt19937_64 engine_;
};

}  // namespace authentree
