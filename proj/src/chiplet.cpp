// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "authentree/chiplet.hpp"

#include <cstring>
#include <stdexcept>

#include <json.hpp>

namespace authentree {

namespace {

std::array<std::uint8_t, 32> derive_secret_tagged(std::string_view tag,
                                                  std::uint64_t seed,
                                                  NodeId id) {
    Bytes input(tag.begin(), tag.end());
    append_be64(input, seed);
    append_be64(input, id);
    return sha256(input).bytes;
}

}  // namespace

std::array<std::uint8_t, 32> derive_puf_secret(std::uint64_t seed, NodeId id) {
    return derive_secret_tagged("authentree.puf", seed, id);
}

std::array<std::uint8_t, 32> derive_clone_secret(std::uint64_t seed, NodeId id) {
    return derive_secret_tagged("authentree.clone", seed, id);
}

Challenge derive_enrollment_challenge(std::uint64_t seed) {
    const auto full = derive_secret_tagged("authentree.challenge", seed, 0);
    Challenge c{};
    std::memcpy(c.data(), full.data(), c.size());
    return c;
}

Signature generate_signature(const Chiplet& chiplet, const Challenge& challenge,
                             std::size_t bit_length) {
    if (bit_length == 0) {
        throw std::invalid_argument("signature length must be positive");
    }
    const std::size_t byte_length = (bit_length + 7) / 8;

    Bytes material;
    material.reserve(byte_length + 32);
    Bytes base(chiplet.puf_secret.begin(), chiplet.puf_secret.end());
    append_bytes(base, challenge);

    Digest256 block = sha256(base);
    std::uint32_t counter = 0;
    while (material.size() < byte_length) {
        append_bytes(material, block.bytes);
        ++counter;
        Bytes next = base;
        append_be32(next, counter);
        block = sha256(next);
    }
    material.resize(byte_length);
    if (bit_length % 8 != 0) {
        const unsigned keep = static_cast<unsigned>(bit_length % 8);
        material.back() &= static_cast<std::uint8_t>(0xffu << (8 - keep));
    }

    Signature sig;
    sig.bytes = std::move(material);
    sig.bit_length = bit_length;
    return sig;
}

Digest256 respond_to_auth(const Chiplet& chiplet, const Challenge& challenge,
                          const SessionContext& ctx, std::size_t bit_length) {
    if (chiplet.behavior == Behavior::ReplayRecorded && chiplet.replay_digest) {
        return *chiplet.replay_digest;
    }
    Signature sig = generate_signature(chiplet, challenge, bit_length);
    if (!chiplet.signature_tamper.empty()) {
        sig.bytes = flip_bits(sig.bytes, chiplet.signature_tamper);
    }
    return session_digest(sig, ctx, chiplet.id);
}

Digest256 expected_digest(const Manifest& manifest, NodeId id,
                          const SessionContext& ctx) {
    const auto it = manifest.entries.find(id);
    if (it == manifest.entries.end()) {
        throw std::out_of_range("chiplet not in manifest");
    }
    return session_digest(it->second, ctx, id);
}

Manifest enroll(const std::vector<Chiplet>& chiplets, std::uint64_t seed,
                std::size_t signature_bits) {
    Manifest manifest;
    manifest.challenge = derive_enrollment_challenge(seed);
    for (const Chiplet& c : chiplets) {
        // Enrollment records the genuine vendor signature, whatever secret the
        // assembled device actually carries.
        Chiplet genuine = c;
        genuine.puf_secret = derive_puf_secret(seed, c.id);
        manifest.entries[c.id] =
            generate_signature(genuine, manifest.challenge, signature_bits);
    }
    return manifest;
}

std::string Manifest::to_json() const {
    nlohmann::json j;
    j["challenge"] = to_hex(challenge);
    nlohmann::json entries_json = nlohmann::json::object();
    for (const auto& [id, sig] : entries) {
        entries_json[std::to_string(id)] = to_hex(sig.bytes);
    }
    j["entries"] = entries_json;
    return j.dump(2) + "\n";
}

Manifest Manifest::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Manifest m;
    const Bytes challenge_raw = from_hex(j.at("challenge").get<std::string>());
    if (challenge_raw.size() != m.challenge.size()) {
        throw std::invalid_argument("manifest challenge must be 16 octets");
    }
    std::memcpy(m.challenge.data(), challenge_raw.data(), m.challenge.size());
    for (const auto& [key, value] : j.at("entries").items()) {
        const NodeId id = std::stoull(key);
        m.entries[id] = Signature::from_bytes(from_hex(value.get<std::string>()));
    }
    return m;
}

}  // namespace authentree
