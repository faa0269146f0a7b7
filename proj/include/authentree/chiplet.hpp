// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "authentree/crypto.hpp"

namespace authentree {

using NodeId = std::uint64_t;
using Challenge = std::array<std::uint8_t, 16>;

enum class Role { Integrator, ThirdParty };

/// How a device behaves when challenged. Clone is expressed by giving the
/// device a puf_secret different from its enrolled one; Silent never answers;
/// ReplayRecorded emits a digest captured in an earlier session; ForgeMatch
/// is an integrator-side behavior (lies Match in verdicts, used by the
/// collusion experiments).
enum class Behavior { Honest, Silent, ReplayRecorded, ForgeMatch };

/// Behavioral model of one die on the interposer. The puf_secret models an
/// ideal noiseless strong PUF; it never leaves the device, only digests of
/// it do.
struct Chiplet {
    NodeId id = 0;
    Role role = Role::ThirdParty;
    std::array<std::uint8_t, 32> puf_secret{};
    std::uint32_t hash_cycles = 96;
    bool honest = true;
    Behavior behavior = Behavior::Honest;

    /// Pre-hash tamper hook used by the fault-injection harness: these bit
    /// positions of the generated signature are flipped before hashing.
    std::vector<std::size_t> signature_tamper;

    /// Digest captured from an earlier session, replayed verbatim when
    /// behavior == ReplayRecorded.
    std::optional<Digest256> replay_digest;
};

/// Golden enrollment reference held by the SiP designer: one expected raw
/// signature per chiplet for the fixed enrollment challenge.
struct Manifest {
    Challenge challenge{};
    std::map<NodeId, Signature> entries;

    /// JSON object { "challenge": hex, "entries": { "<id>": hex-signature } }.
    std::string to_json() const;
    static Manifest from_json(const std::string& text);
};

/// Deterministic PUF response: sha256(puf_secret || challenge), extended by
/// counter-mode rehashing sha256(puf_secret || challenge || be32(i)) for
/// blocks i >= 1, truncated to bit_length bits (trailing bits zeroed).
Signature generate_signature(const Chiplet& chiplet, const Challenge& challenge,
                             std::size_t bit_length);

/// The session-bound response token the device emits when challenged:
/// session_digest(generate_signature(...), ctx, chiplet.id). Tamper and
/// replay behaviors are applied here; Silent devices are handled by the
/// protocol engine (no token at all).
Digest256 respond_to_auth(const Chiplet& chiplet, const Challenge& challenge,
                          const SessionContext& ctx, std::size_t bit_length);

/// Verifier-side recomputation of the golden token from the manifest.
/// Throws std::out_of_range("chiplet not in manifest") for unknown ids.
Digest256 expected_digest(const Manifest& manifest, NodeId id,
                          const SessionContext& ctx);

/// Device-unique enrollment secret derived from the run seed; the enrolled
/// (genuine) secret for every id in a scenario.
std::array<std::uint8_t, 32> derive_puf_secret(std::uint64_t seed, NodeId id);

/// A fresh secret unequal to the enrolled one, for counterfeit devices.
std::array<std::uint8_t, 32> derive_clone_secret(std::uint64_t seed, NodeId id);

/// The single 128-bit enrollment challenge for a run.
Challenge derive_enrollment_challenge(std::uint64_t seed);

/// Builds the golden manifest for a set of chiplets by enrolling their
/// genuine signatures at the fixed challenge.
Manifest enroll(const std::vector<Chiplet>& chiplets, std::uint64_t seed,
                std::size_t signature_bits);

}  // namespace authentree
