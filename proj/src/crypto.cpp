// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "authentree/crypto.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string_view>

namespace authentree {

namespace {

Bytes tagged_seed_input(std::string_view tag, std::uint64_t seed,
                        std::uint64_t counter) {
    Bytes input(tag.begin(), tag.end());
    append_be64(input, seed);
    append_be64(input, counter);
    return input;
}

}  // namespace

SessionContext SessionSource::at(std::uint64_t seed, std::uint64_t session_id) {
    SessionContext ctx;
    ctx.session_id = session_id;
    const Digest256 d =
        sha256(tagged_seed_input("authentree.nonce", seed, session_id));
    std::memcpy(ctx.nonce.data(), d.bytes.data(), ctx.nonce.size());
    return ctx;
}

SessionContext SessionSource::next() { return at(seed_, next_id_++); }

Digest256 session_digest(const Signature& sig, const SessionContext& ctx,
                         std::uint64_t target_id) {
    Bytes input = sig.bytes;
    append_bytes(input, ctx.nonce);
    append_be64(input, ctx.session_id);
    append_be64(input, target_id);
    return sha256(input);
}

int hamming_distance(const Digest256& a, const Digest256& b) {
    int count = 0;
    for (std::size_t i = 0; i < a.bytes.size(); ++i) {
        count += std::popcount(static_cast<unsigned>(a.bytes[i] ^ b.bytes[i]));
    }
    return count;
}

Bytes flip_bits(std::span<const std::uint8_t> data,
                std::span<const std::size_t> positions) {
    Bytes out(data.begin(), data.end());
    std::vector<std::size_t> seen(positions.begin(), positions.end());
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        throw std::invalid_argument("duplicate flip position");
    }
    for (std::size_t pos : positions) {
        if (pos >= data.size() * 8) {
            throw std::out_of_range("bit index exceeds data length");
        }
        // Bit 0 is the MSB of octet 0.
        out[pos / 8] ^= static_cast<std::uint8_t>(0x80u >> (pos % 8));
    }
    return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    const Digest256 d =
        sha256(tagged_seed_input("authentree.derive", seed, index));
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) {
        out = (out << 8) | d.bytes[static_cast<std::size_t>(i)];
    }
    return out;
}

std::uint64_t DetRng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("bound must be nonzero");
    }
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % bound;
}

Bytes DetRng::bytes(std::size_t count) {
    Bytes out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(next_byte());
    }
    return out;
}

std::vector<std::size_t> DetRng::distinct_positions(std::size_t k,
                                                    std::size_t total) {
    if (k > total) {
        throw std::invalid_argument("cannot draw more positions than exist");
    }
    std::vector<std::size_t> picked;
    picked.reserve(k);
    while (picked.size() < k) {
        const std::size_t candidate = static_cast<std::size_t>(below(total));
        if (std::find(picked.begin(), picked.end(), candidate) == picked.end()) {
            picked.push_back(candidate);
        }
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

}  // namespace authentree
