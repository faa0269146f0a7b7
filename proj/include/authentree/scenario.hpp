// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "authentree/attacks.hpp"
#include "authentree/protocol.hpp"

namespace authentree {

/// One scheduled link fault from the scenario file.
struct FaultSpec {
    Link link;
    LinkState state;
    std::optional<std::uint64_t> from_cycle;  // windowed when present
    std::optional<std::uint64_t> to_cycle;
};

struct NodeSpec {
    NodeId id = 0;
    Role role = Role::ThirdParty;
    std::string behavior = "honest";  // honest | clone | silent | forge_match
};

struct AttackSectionSpec {
    std::vector<std::size_t> sweep_lengths = {64, 128, 256, 512};
    std::vector<std::string> attacks = {"fault_injection", "removal", "dos"};
    std::size_t trials = 1000;
    std::optional<NodeId> target;
    std::optional<NodeId> victim_integrator;
};

/// Parsed scenario file (schema 1). Everything a run needs: topology, roles,
/// behaviors, fault schedule, protocol knobs, optional attack section, seed.
struct ScenarioConfig {
    std::uint64_t seed = 0;
    bool seed_present = false;
    std::vector<NodeSpec> nodes;
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<FaultSpec> faults;

    std::optional<std::uint8_t> quorum_t;  // empty = "auto"
    std::optional<std::uint8_t> quorum_n;  // optional cross-check
    std::size_t signature_length_bits = 256;
    std::uint32_t fanout = 2;
    double clock_ghz = 1.0;
    std::uint32_t hash_cycles = 96;
    double puf_bit_error_rate = 0.0;
    std::uint32_t link_latency_cycles = 1;

    std::optional<AttackSectionSpec> attack;

    std::string raw_json;  // normalized scenario text, embedded in transcripts

    static ScenarioConfig from_json_text(const std::string& text);
    static ScenarioConfig from_file(const std::string& path);

    /// Full schema + invariant check; empty result means clean.
    std::vector<std::string> validate() const;

    Topology build_topology() const;
    std::vector<Chiplet> build_devices(std::uint64_t seed) const;
    ProtocolConfig protocol_config() const;
    AttackSetup attack_setup(std::uint64_t seed) const;
};

/// Transcript JSONL: a header record embedding the scenario, one record per
/// message, and a terminal summary record (its absence marks truncation).
std::string transcript_jsonl(const AuthReport& report,
                             const std::string& scenario_json);

struct ParsedTranscript {
    std::uint64_t seed = 0;
    std::uint64_t session_id = 0;
    ScenarioConfig scenario;
    std::vector<TranscriptRecord> messages;
    std::map<NodeId, std::string> verdicts;
    std::uint64_t critical_path_cycles = 0;
};

/// Throws std::runtime_error("transcript ends mid-session") when the summary
/// record is missing, std::invalid_argument for malformed records.
ParsedTranscript parse_transcript(const std::string& jsonl_text);

}  // namespace authentree
