// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <string>
#include <vector>

#include "authentree/protocol.hpp"

namespace authentree {

/// Base scenario for one attack campaign. The share-removal family runs with
/// an n-of-n quorum: the measured deployment makes every integrator's
/// contribution essential, so omitting a single share is a detectable
/// protocol violation rather than tolerated redundancy.
struct AttackSetup {
    Topology topology;
    ProtocolConfig config;
    std::uint64_t seed = 1;
    NodeId target = 0;             // victim third-party chiplet
    NodeId victim_integrator = 0;  // share-removal victim (0 = auto: second root)
    std::size_t trials = 1000;
};

/// Per-campaign result: raw per-trial Hamming distances plus verdict tallies.
/// Statistics are always recomputed from the raw list.
struct HammingReport {
    std::string attack;
    std::size_t signature_length_bits = 0;
    std::vector<int> distances;
    std::map<std::string, std::size_t> verdicts;  // final verdict -> count
    std::size_t trials = 0;

    double mean() const;
    double stddev() const;  // sample std, 0 when trials <= 1
    int min() const;
    int max() const;
    double fail_rate() const;  // fraction of trials with final verdict != pass
};

struct ReplayReport {
    std::size_t sessions = 0;
    std::size_t replayed_messages = 0;
    std::size_t acceptances = 0;          // cross-session accepts (must be 0)
    std::size_t duplicates_accepted = 0;  // same-session idempotent accepts
    std::vector<int> distances;           // replayed digest vs fresh expected

    double mean_hd() const;
};

struct CloneReport {
    Verdict final_verdict = Verdict::Anomalous;
    FaultClass classification = FaultClass::Authentic;
    bool perfect_clone_model_limit = false;
    std::size_t pass_count = 0;
};

/// Flips k random distinct bits of the target's signature before hashing,
/// per trial, and records HD(tampered digest, reference digest) plus the
/// protocol's final verdict for the target. k must be in [1, signature bits].
HammingReport attack_bit_flip(const AttackSetup& setup, std::size_t k);

enum class RemovalMode {
    Withhold,  // "removal": the victim's payload is zero-filled in the
               // degraded aggregate; strict path sees a missing share
    Corrupt,   // "dos": the victim's payload is replaced with garbage
};

/// Runs authentication with one integrator's share contribution withheld or
/// corrupted. Strict verdicts (always non-Pass at n-of-n) and the degraded
/// aggregate HD are both recorded per trial.
HammingReport attack_share_removal(const AttackSetup& setup, RemovalMode mode);

/// Records Pass sessions and re-injects every recorded Response into a fresh
/// session; also exercises same-session duplicate delivery (idempotent).
ReplayReport attack_replay(const AttackSetup& setup);

/// Replaces the target's puf_secret with a fresh value (or, for the
/// perfect-clone model-limit probe, the identical one) and runs the full flow.
CloneReport attack_clone(const AttackSetup& setup, bool perfect_clone = false);

/// Cartesian campaign over signature lengths x attack families, producing
/// the sweep data grid. Known families: fault_injection, removal, dos.
/// Cells are independent; jobs > 1 fans them across worker threads (each
/// cell owns its engine and per-trial seeds, so results are identical for
/// any schedule).
std::vector<HammingReport> sweep(const AttackSetup& base,
                                 const std::vector<std::size_t>& lengths,
                                 const std::vector<std::string>& attacks,
                                 std::size_t jobs = 1);

/// CSV with header attack,length_bits,mean_hd,std_hd,min,max,fail_rate and
/// LF line endings; byte-stable for fixed inputs.
std::string sweep_csv(const std::vector<HammingReport>& reports);

/// One JSON line per trial (attack, length_bits, trial, hd, verdict).
std::string raw_trials_jsonl(const std::vector<HammingReport>& reports);

/// Compact built-in scenario used as the default sweep base: a star of 4
/// integrators and 4 third-party chiplets.
AttackSetup default_attack_setup(std::uint64_t seed, std::size_t trials);

}  // namespace authentree
