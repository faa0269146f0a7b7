// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "authentree/shamir.hpp"
#include "authentree/topology.hpp"

namespace authentree {

/// Protocol-wide knobs. quorum_t empty means auto: t = ceil(2n/3) over the
/// surviving integrator count.
struct ProtocolConfig {
    std::optional<std::uint8_t> quorum_t;
    std::size_t signature_length_bits = 256;
    std::uint32_t fanout = 2;
    double clock_ghz = 1.0;
    std::uint32_t hash_cycles = 96;
    double puf_bit_error_rate = 0.0;
};

/// The cross-authenticated integrator set that collectively authenticates
/// every other chiplet. With n <= 8 the tree is its flat root set; fanout
/// shapes only the aggregation latency.
struct TrustTree {
    std::vector<NodeId> root_set;  // ascending; all passed cross-auth
    std::vector<NodeId> excluded;  // integrators that failed a peer check
    std::uint32_t fanout = 2;
    SharingPolicy quorum;
};

enum class Outcome { Match, Mismatch, NoResponse };

enum class Verdict { Pass, Fail, Anomalous };

struct IntegratorVerdict {
    NodeId integrator_id = 0;
    NodeId target_id = 0;
    Outcome outcome = Outcome::NoResponse;
    std::optional<Digest256> observed_digest;
    std::size_t route_used = 0;
    std::uint64_t cycles_spent = 0;
};

enum class FaultClass { Authentic, ChipletFault, LinkFault, Transient };

struct FaultDiagnosis {
    struct Probe {
        NodeId integrator_id = 0;
        std::size_t route = 0;
        Outcome outcome = Outcome::NoResponse;
        std::uint32_t round = 0;
    };

    NodeId target_id = 0;
    FaultClass classification = FaultClass::Authentic;
    std::vector<Link> suspect_links;  // populated for LinkFault
    std::vector<Probe> evidence;
    bool degraded = false;  // "localization degraded: shared-route evidence only"
    std::uint32_t rounds_used = 0;
};

struct TargetReport {
    Verdict first_round_verdict = Verdict::Anomalous;
    Verdict final_verdict = Verdict::Anomalous;
    bool dos_suspected = false;
    std::vector<IntegratorVerdict> integrator_verdicts;
    std::optional<FaultDiagnosis> diagnosis;
};

struct TranscriptRecord {
    Message msg;
    std::size_t route = 0;
    std::string outcome;  // delivered | dropped | corrupted | retry
    std::uint64_t arrival_cycle = 0;
};

struct LatencyReport {
    std::uint64_t critical_path_cycles = 0;
    std::uint64_t total_cycles = 0;
    double clock_ghz = 1.0;
    double wall_time_ns = 0.0;
};

struct AuthReport {
    std::uint64_t session_id = 0;
    std::uint64_t seed = 0;
    TrustTree tree;
    std::map<NodeId, TargetReport> targets;
    LatencyReport latency;
    std::vector<TranscriptRecord> transcripts;

    bool all_pass() const;
    std::string to_json() const;
};

/// Comparator-tree depth for combining verdicts: one comparator cycle per
/// level, n_roots votes per target and n_targets results folded with the
/// configured fanout. A single flat aggregation round is the
/// fanout >= width case.
std::uint64_t aggregation_cycles(std::size_t n_roots, std::size_t n_targets,
                                 std::uint32_t fanout);

inline double wall_time_ns(std::uint64_t cycles, double clock_ghz) {
    return static_cast<double>(cycles) / clock_ghz;
}

/// (critical_path_cycles, wall_time_ns) at the given clock.
std::pair<std::uint64_t, double> latency_model(const AuthReport& report,
                                               double clock_ghz);

/// Deterministic protocol engine for one SiP scenario. Owns the topology,
/// device states, manifest, transcripts and the cycle clock; drives every
/// protocol phase. Logical parallelism (parallel hashing, parallel quorum
/// challenges) lives in the latency accounting, not in threads.
class SipSimulation {
public:
    SipSimulation(Topology topology, std::vector<Chiplet> devices,
                  Manifest manifest, ProtocolConfig config, std::uint64_t seed);

    /// Full pipeline: session setup, cross-authentication, share
    /// distribution, quorum authentication of every third-party chiplet,
    /// escalation and diagnosis, latency accounting.
    AuthReport run();

    /// Starts a fresh session (strictly increasing session_id) and resets
    /// per-session share state. Returns the new context.
    const SessionContext& begin_session();

    /// Pairwise integrator cross-authentication; excludes any integrator
    /// whose response fails a peer check. Throws std::runtime_error
    /// ("insufficient trusted integrators") when fewer than 3 survive or the
    /// configured quorum cannot be met.
    TrustTree cross_authenticate_integrators();

    /// Splits each third-party chiplet's expected session digest per the
    /// tree quorum and delivers one share to each trusted integrator over
    /// the interposer (dealer = lowest-id root, its own share is kept
    /// locally). Dropped deliveries retry once on the next route; a second
    /// failure throws ("share distribution failed: integrator k").
    std::map<NodeId, std::vector<Share>> distribute_shares(const TrustTree& tree);

    /// Quorum authentication of one third-party chiplet. Pass: every root
    /// matches (and at least t of them); Fail: >= t mismatches agreeing on
    /// the observed digest; otherwise Anomalous. A failed share
    /// reconstruction yields Anomalous with dos_suspected.
    std::pair<Verdict, std::vector<IntegratorVerdict>> authenticate_chiplet(
        const TrustTree& tree, NodeId target);

    /// Escalation: suspects re-probe their original route
    /// and a link-disjoint alternate, two majority integrators act as
    /// controls; persistent route-local faults classify as LinkFault,
    /// vanished faults as Transient (after a confirmation round), faults
    /// following the chiplet across disjoint routes as ChipletFault. Capped
    /// at 3 rounds, then fail-safe ChipletFault.
    FaultDiagnosis localize_fault(const TrustTree& tree, NodeId target,
                                  const std::vector<IntegratorVerdict>& first_round);

    /// Withholds every share held by one integrator for the rest of the
    /// session (the strict-mode share-disruption hook).
    void withhold_shares(NodeId integrator);

    const SessionContext& session() const { return ctx_; }
    const Topology& topology() const { return topology_; }
    Topology& topology() { return topology_; }
    const Manifest& manifest() const { return manifest_; }
    const ProtocolConfig& config() const { return config_; }
    Chiplet& device(NodeId id);
    const std::vector<TranscriptRecord>& transcripts() const { return transcripts_; }
    std::uint64_t clock_cycle() const { return clock_; }

    /// Expected digest of a target reconstructed from the pooled shares
    /// (strict path). Throws InsufficientSharesError / CorruptedShareError.
    Digest256 reconstruct_expected(const TrustTree& tree, NodeId target);

    /// The shares currently pooled for one target, ascending holder order.
    std::vector<Share> pooled_shares(const TrustTree& tree, NodeId target) const;

private:
    struct Exchange {
        Outcome outcome = Outcome::NoResponse;
        std::optional<Digest256> observed;
        std::uint64_t completion_cycle = 0;
    };

    /// One challenge/response round trip verifier -> responder -> verifier
    /// over the given route, applying link faults at traversal cycles and the
    /// 10x hash timeout for missing responses.
    Exchange exchange(NodeId verifier, NodeId responder, std::size_t route,
                      std::uint64_t emit_cycle);

    Digest256 device_response(const Chiplet& responder, const Challenge& challenge);
    void record(const Message& msg, std::size_t route,
                const DeliveryOutcome& outcome, bool is_retry);
    std::uint64_t timeout_cycles() const { return 10ull * config_.hash_cycles; }

    Topology topology_;
    std::map<NodeId, Chiplet> devices_;
    Manifest manifest_;
    ProtocolConfig config_;
    std::uint64_t seed_;
    SessionSource sessions_;
    SessionContext ctx_;
    DetRng rng_;

    // Per-session state.
    std::map<NodeId, std::map<NodeId, Share>> shares_;  // integrator -> target -> share
    std::vector<TranscriptRecord> transcripts_;
    std::uint64_t clock_ = 0;          // current phase start
    std::uint64_t total_cycles_ = 0;   // accumulated busy cycles (hash + links + agg)
    std::uint64_t window_max_ = 0;     // latest completion in the parallel window
    std::uint64_t last_phase_end_ = 0; // end cycle of the last escalation
};

/// Builds devices from a topology: every node becomes an honest chiplet with
/// its enrolled secret.
std::vector<Chiplet> make_devices(const Topology& topology, std::uint64_t seed);

/// Convenience wrapper: enroll + simulate in one call.
AuthReport authenticate_sip(Topology topology, std::vector<Chiplet> devices,
                            const ProtocolConfig& config, std::uint64_t seed);

std::string verdict_name(Verdict v);
std::string outcome_name(Outcome o);
std::string fault_class_name(FaultClass c);
std::string message_kind_name(MessageKind k);
MessageKind message_kind_from_name(const std::string& name);

}  // namespace authentree
