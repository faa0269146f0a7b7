// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "authentree/bytes.hpp"

namespace authentree {

/// 256-bit hash output, big-endian octet order as produced by SHA-256.
/// Equality is bitwise; this is the universal authentication token.
struct Digest256 {
    std::array<std::uint8_t, 32> bytes{};

    bool operator==(const Digest256&) const = default;
    std::string hex() const { return to_hex(bytes); }
    static Digest256 from_hex_str(std::string_view hex);
};

/// Incremental FIPS 180-4 SHA-256.
class Sha256 {
public:
    Sha256() { reset(); }

    void reset();
    Sha256& update(std::span<const std::uint8_t> data);
    Sha256& update(const Digest256& d) { return update(std::span(d.bytes)); }
    Digest256 finish();

private:
    void compress(const std::uint8_t block[64]);

    std::array<std::uint32_t, 8> state_;
    std::array<std::uint8_t, 64> buffer_;
    std::uint64_t total_bytes_ = 0;
    std::size_t buffer_len_ = 0;
};

/// One-shot digest of an octet string.
Digest256 sha256(std::span<const std::uint8_t> data);
Digest256 sha256(const Bytes& data);

}  // namespace authentree
