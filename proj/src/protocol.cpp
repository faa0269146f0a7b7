// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "authentree/protocol.hpp"

#include <algorithm>
#include <cstring>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace authentree {

namespace {

std::uint64_t ceil_log(std::uint32_t base, std::size_t value) {
    if (value <= 1) return 0;
    std::uint64_t depth = 0;
    std::uint64_t reach = 1;
    while (reach < value) {
        reach *= base;
        ++depth;
    }
    return depth;
}

// Per-session generator seed, so any session is reproducible standalone
// (audit replay re-executes a recorded session without replaying its
// predecessors).
std::uint64_t session_rng_seed(std::uint64_t seed, std::uint64_t session_id) {
    return derive_seed(derive_seed(seed, 0x73657373ull), session_id);
}

std::set<Link> path_links(const Path& path) {
    std::set<Link> links;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        links.emplace(path[i], path[i + 1]);
    }
    return links;
}

}  // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Anomalous: return "anomalous";
    }
    return "?";
}

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Match: return "match";
        case Outcome::Mismatch: return "mismatch";
        case Outcome::NoResponse: return "no_response";
    }
    return "?";
}

std::string fault_class_name(FaultClass c) {
    switch (c) {
        case FaultClass::Authentic: return "authentic";
        case FaultClass::ChipletFault: return "chiplet_fault";
        case FaultClass::LinkFault: return "link_fault";
        case FaultClass::Transient: return "transient";
    }
    return "?";
}

std::string message_kind_name(MessageKind k) {
    switch (k) {
        case MessageKind::Challenge: return "challenge";
        case MessageKind::Response: return "response";
        case MessageKind::Share: return "share";
        case MessageKind::Verdict: return "verdict";
        case MessageKind::Replayed: return "replayed";
    }
    return "?";
}

MessageKind message_kind_from_name(const std::string& name) {
    if (name == "challenge") return MessageKind::Challenge;
    if (name == "response") return MessageKind::Response;
    if (name == "share") return MessageKind::Share;
    if (name == "verdict") return MessageKind::Verdict;
    if (name == "replayed") return MessageKind::Replayed;
    throw std::invalid_argument("unknown message kind: " + name);
}

std::uint64_t aggregation_cycles(std::size_t n_roots, std::size_t n_targets,
                                 std::uint32_t fanout) {
    const std::uint32_t f = std::max<std::uint32_t>(fanout, 2);
    const std::uint64_t depth =
        ceil_log(f, n_roots) + ceil_log(f, std::max<std::size_t>(n_targets, 1));
    return std::max<std::uint64_t>(depth, 1);
}

std::pair<std::uint64_t, double> latency_model(const AuthReport& report,
                                               double clock_ghz) {
    return {report.latency.critical_path_cycles,
            wall_time_ns(report.latency.critical_path_cycles, clock_ghz)};
}

bool AuthReport::all_pass() const {
    return std::all_of(targets.begin(), targets.end(), [](const auto& kv) {
        return kv.second.final_verdict == Verdict::Pass;
    });
}

SipSimulation::SipSimulation(Topology topology, std::vector<Chiplet> devices,
                             Manifest manifest, ProtocolConfig config,
                             std::uint64_t seed)
    : topology_(std::move(topology)),
      manifest_(std::move(manifest)),
      config_(config),
      seed_(seed),
      sessions_(seed),
      ctx_(sessions_.next()),
      rng_(session_rng_seed(seed, 1)) {
    for (Chiplet& device : devices) {
        device.hash_cycles = config_.hash_cycles;
        devices_.emplace(device.id, std::move(device));
    }
}

Chiplet& SipSimulation::device(NodeId id) {
    const auto it = devices_.find(id);
    if (it == devices_.end()) {
        throw std::out_of_range("unknown chiplet id: " + std::to_string(id));
    }
    return it->second;
}

const SessionContext& SipSimulation::begin_session() {
    ctx_ = sessions_.next();
    rng_ = DetRng(session_rng_seed(seed_, ctx_.session_id));
    shares_.clear();
    transcripts_.clear();
    clock_ = 0;
    total_cycles_ = 0;
    window_max_ = 0;
    last_phase_end_ = 0;
    return ctx_;
}

void SipSimulation::record(const Message& msg, std::size_t route,
                           const DeliveryOutcome& outcome, bool is_retry) {
    TranscriptRecord rec;
    rec.msg = msg;
    rec.route = route;
    std::string label;
    switch (outcome.kind) {
        case DeliveryOutcome::Kind::Delivered: label = "delivered"; break;
        case DeliveryOutcome::Kind::Dropped: label = "dropped"; break;
        case DeliveryOutcome::Kind::Corrupted: label = "corrupted"; break;
    }
    rec.outcome = is_retry ? "retry:" + label : label;
    rec.arrival_cycle = outcome.delivered() ? outcome.arrival_cycle : 0;
    transcripts_.push_back(std::move(rec));
}

Digest256 SipSimulation::device_response(const Chiplet& responder,
                                         const Challenge& challenge) {
    if (responder.behavior == Behavior::ReplayRecorded &&
        responder.replay_digest) {
        return *responder.replay_digest;
    }
    Signature sig =
        generate_signature(responder, challenge, config_.signature_length_bits);
    if (!responder.signature_tamper.empty()) {
        sig.bytes = flip_bits(sig.bytes, responder.signature_tamper);
    }
    if (config_.puf_bit_error_rate > 0.0) {
        // Noisy-PUF hook: independent per-bit flips; any flip fails the
        // authentication downstream (no fuzzy extraction in this model).
        std::vector<std::size_t> noisy;
        for (std::size_t bit = 0; bit < sig.bit_length; ++bit) {
            const double draw = static_cast<double>(rng_.next_u64()) /
                                static_cast<double>(UINT64_MAX);
            if (draw < config_.puf_bit_error_rate) noisy.push_back(bit);
        }
        if (!noisy.empty()) sig.bytes = flip_bits(sig.bytes, noisy);
    }
    return session_digest(sig, ctx_, responder.id);
}

SipSimulation::Exchange SipSimulation::exchange(NodeId verifier,
                                                NodeId responder,
                                                std::size_t route,
                                                std::uint64_t emit_cycle) {
    Exchange ex;
    const std::vector<Path>& paths = topology_.routes(verifier, responder);
    if (route >= paths.size()) {
        throw std::out_of_range("no such route");
    }
    const Path& forward = paths[route];

    Message challenge_msg;
    challenge_msg.src = verifier;
    challenge_msg.dst = responder;
    challenge_msg.kind = MessageKind::Challenge;
    challenge_msg.payload.assign(manifest_.challenge.begin(),
                                 manifest_.challenge.end());
    challenge_msg.session_id = ctx_.session_id;
    challenge_msg.emit_cycle = emit_cycle;

    const DeliveryOutcome to_target = topology_.transmit_over(challenge_msg, forward);
    record(challenge_msg, route, to_target, false);

    if (!to_target.delivered()) {
        ex.outcome = Outcome::NoResponse;
        ex.completion_cycle = emit_cycle + timeout_cycles();
        total_cycles_ += timeout_cycles();
        return ex;
    }
    total_cycles_ += to_target.arrival_cycle - emit_cycle;

    const Chiplet& target = devices_.at(responder);
    if (target.behavior == Behavior::Silent) {
        ex.outcome = Outcome::NoResponse;
        ex.completion_cycle = emit_cycle + timeout_cycles();
        total_cycles_ += timeout_cycles();
        return ex;
    }

    Challenge seen{};
    std::memcpy(seen.data(), to_target.payload.data(), seen.size());
    const Digest256 response = device_response(target, seen);
    if (target.behavior != Behavior::ReplayRecorded) {
        total_cycles_ += target.hash_cycles;  // one respond_to_auth = one hash
    }

    Message response_msg;
    response_msg.src = responder;
    response_msg.dst = verifier;
    response_msg.kind = MessageKind::Response;
    response_msg.payload.assign(response.bytes.begin(), response.bytes.end());
    response_msg.session_id = ctx_.session_id;
    response_msg.emit_cycle = to_target.arrival_cycle + target.hash_cycles;

    Path back(forward.rbegin(), forward.rend());
    const DeliveryOutcome to_verifier =
        topology_.transmit_over(response_msg, back);
    record(response_msg, route, to_verifier, false);

    if (!to_verifier.delivered()) {
        ex.outcome = Outcome::NoResponse;
        ex.completion_cycle = emit_cycle + timeout_cycles();
        total_cycles_ += timeout_cycles();
        return ex;
    }
    total_cycles_ += to_verifier.arrival_cycle - response_msg.emit_cycle;

    Digest256 observed;
    std::memcpy(observed.bytes.data(), to_verifier.payload.data(), 32);
    ex.observed = observed;
    ex.outcome = Outcome::Match;  // provisional; caller compares digests
    ex.completion_cycle = to_verifier.arrival_cycle;
    return ex;
}

TrustTree SipSimulation::cross_authenticate_integrators() {
    const std::vector<NodeId> integrators =
        topology_.ids_with_role(Role::Integrator);
    if (integrators.size() < 3) {
        throw std::runtime_error("insufficient trusted integrators");
    }

    std::set<NodeId> failed;
    std::uint64_t window = clock_;
    for (NodeId verifier : integrators) {
        for (NodeId peer : integrators) {
            if (verifier == peer) continue;
            const Digest256 want = expected_digest(manifest_, peer, ctx_);
            const Exchange ex = exchange(verifier, peer, 0, clock_);
            window = std::max(window, ex.completion_cycle);
            bool ok = ex.observed && *ex.observed == want;
            if (!ok && topology_.routes(verifier, peer).size() > 1) {
                // One cross-validation retry over the disjoint route, so a
                // single interposer fault cannot evict healthy integrators.
                const Exchange retry =
                    exchange(verifier, peer, 1, ex.completion_cycle);
                window = std::max(window, retry.completion_cycle);
                ok = retry.observed && *retry.observed == want;
            }
            if (!ok) {
                failed.insert(peer);
            }
        }
    }

    TrustTree tree;
    tree.fanout = std::max<std::uint32_t>(config_.fanout, 2);
    for (NodeId id : integrators) {
        if (failed.contains(id)) {
            tree.excluded.push_back(id);
        } else {
            tree.root_set.push_back(id);
        }
    }
    if (tree.root_set.size() < 3) {
        throw std::runtime_error("insufficient trusted integrators");
    }

    const auto n = static_cast<std::uint8_t>(tree.root_set.size());
    std::uint8_t t;
    if (config_.quorum_t) {
        t = *config_.quorum_t;
        if (t > n) {
            throw std::runtime_error("insufficient trusted integrators");
        }
    } else {
        t = static_cast<std::uint8_t>((2 * tree.root_set.size() + 2) / 3);
    }
    tree.quorum = SharingPolicy{n, t};
    tree.quorum.validate();

    window_max_ = std::max(window_max_, window);
    return tree;
}

std::map<NodeId, std::vector<Share>> SipSimulation::distribute_shares(
    const TrustTree& tree) {
    const NodeId dealer = tree.root_set.front();
    std::map<NodeId, std::vector<Share>> issued;

    for (const auto& [id, role] : topology_.nodes()) {
        if (role != Role::ThirdParty) continue;
        const Digest256 expected = expected_digest(manifest_, id, ctx_);
        total_cycles_ += config_.hash_cycles;  // dealer-side golden hash
        const Bytes secret(expected.bytes.begin(), expected.bytes.end());
        const std::vector<Share> shares = split(secret, tree.quorum, rng_);

        for (std::size_t k = 0; k < tree.root_set.size(); ++k) {
            const NodeId holder = tree.root_set[k];
            const Share& share = shares[k];
            if (holder != dealer) {
                Message msg;
                msg.src = dealer;
                msg.dst = holder;
                msg.kind = MessageKind::Share;
                msg.payload = share.serialize();
                msg.session_id = ctx_.session_id;
                msg.emit_cycle = clock_;

                DeliveryOutcome out = topology_.transmit(msg, 0);
                record(msg, 0, out, false);
                if (!out.delivered()) {
                    // One retry over the next (link-disjoint) route.
                    const std::size_t n_routes =
                        topology_.routes(dealer, holder).size();
                    const std::size_t alt = n_routes > 1 ? 1 : 0;
                    Message retry = msg;
                    retry.emit_cycle =
                        clock_ + 2ull * topology_.base_link_latency();
                    out = topology_.transmit(retry, alt);
                    record(retry, alt, out, true);
                    if (!out.delivered()) {
                        throw std::runtime_error(
                            "share distribution failed: integrator " +
                            std::to_string(holder));
                    }
                }
                total_cycles_ += out.arrival_cycle - msg.emit_cycle;
                window_max_ = std::max(window_max_, out.arrival_cycle);
            }
            shares_[holder][id] = share;
            issued[holder].push_back(share);
        }
    }
    return issued;
}

void SipSimulation::withhold_shares(NodeId integrator) {
    shares_.erase(integrator);
}

std::vector<Share> SipSimulation::pooled_shares(const TrustTree& tree,
                                                NodeId target) const {
    std::vector<Share> pool;
    for (NodeId holder : tree.root_set) {
        const auto holder_it = shares_.find(holder);
        if (holder_it == shares_.end()) continue;
        const auto share_it = holder_it->second.find(target);
        if (share_it == holder_it->second.end()) continue;
        pool.push_back(share_it->second);
    }
    return pool;
}

Digest256 SipSimulation::reconstruct_expected(const TrustTree& tree,
                                              NodeId target) {
    const Bytes secret = reconstruct(pooled_shares(tree, target), tree.quorum);
    Digest256 digest;
    std::memcpy(digest.bytes.data(), secret.data(), 32);
    return digest;
}

std::pair<Verdict, std::vector<IntegratorVerdict>>
SipSimulation::authenticate_chiplet(const TrustTree& tree, NodeId target) {
    if (topology_.role_of(target) != Role::ThirdParty) {
        throw std::invalid_argument("target must be a third-party chiplet");
    }

    Digest256 expected;
    try {
        expected = reconstruct_expected(tree, target);
    } catch (const InsufficientSharesError&) {
        return {Verdict::Anomalous, {}};
    } catch (const CorruptedShareError&) {
        return {Verdict::Anomalous, {}};
    }

    std::vector<IntegratorVerdict> verdicts;
    for (NodeId root : tree.root_set) {
        const Exchange ex = exchange(root, target, 0, clock_);
        window_max_ = std::max(window_max_, ex.completion_cycle);

        IntegratorVerdict iv;
        iv.integrator_id = root;
        iv.target_id = target;
        iv.route_used = 0;
        iv.cycles_spent = ex.completion_cycle - clock_;
        iv.observed_digest = ex.observed;
        if (!ex.observed) {
            iv.outcome = Outcome::NoResponse;
        } else {
            iv.outcome =
                (*ex.observed == expected) ? Outcome::Match : Outcome::Mismatch;
        }
        if (devices_.at(root).behavior == Behavior::ForgeMatch) {
            // Colluding integrator claims a perfect match regardless.
            iv.outcome = Outcome::Match;
            iv.observed_digest = expected;
        }
        verdicts.push_back(std::move(iv));
    }

    const std::size_t match_count = static_cast<std::size_t>(
        std::count_if(verdicts.begin(), verdicts.end(), [](const auto& v) {
            return v.outcome == Outcome::Match;
        }));
    const std::uint8_t t = tree.quorum.t;

    Verdict verdict = Verdict::Anomalous;
    if (match_count == verdicts.size() && match_count >= t) {
        // Any inconsistency escalates; a clean Pass needs the whole quorum.
        verdict = Verdict::Pass;
    } else {
        std::map<std::string, std::size_t> agreeing;
        for (const auto& v : verdicts) {
            if (v.outcome == Outcome::Mismatch && v.observed_digest) {
                agreeing[v.observed_digest->hex()]++;
            }
        }
        for (const auto& [digest, count] : agreeing) {
            if (count >= t) {
                verdict = Verdict::Fail;
                break;
            }
        }
    }
    return {verdict, verdicts};
}

FaultDiagnosis SipSimulation::localize_fault(
    const TrustTree& tree, NodeId target,
    const std::vector<IntegratorVerdict>& first_round) {
    FaultDiagnosis diag;
    diag.target_id = target;

    Digest256 expected;
    try {
        expected = reconstruct_expected(tree, target);
    } catch (const std::exception&) {
        // Without a reference digest no route evidence can be judged.
        diag.classification = FaultClass::ChipletFault;
        diag.rounds_used = 0;
        last_phase_end_ = clock_;
        return diag;
    }

    std::vector<IntegratorVerdict> suspects;
    std::vector<IntegratorVerdict> witnesses;
    for (const auto& iv : first_round) {
        (iv.outcome == Outcome::Match ? witnesses : suspects).push_back(iv);
    }
    if (suspects.empty()) {
        diag.classification = FaultClass::Authentic;
        last_phase_end_ = clock_;
        return diag;
    }
    std::set<Link> failing_links;
    std::set<Link> passing_links;
    for (const auto& iv : first_round) {
        const Path& path = topology_.routes(iv.integrator_id, target)[iv.route_used];
        const std::set<Link> links = path_links(path);
        auto& bucket = (iv.outcome == Outcome::Match) ? passing_links : failing_links;
        bucket.insert(links.begin(), links.end());
    }

    std::uint64_t round_start = clock_;
    bool pending_transient = false;

    // Lowest-index route that avoids currently-suspected links and the given
    // index; falls back to simple rotation when every route is implicated.
    auto pick_clean_route = [&](NodeId integrator, std::size_t avoid,
                                std::uint32_t round) {
        const std::vector<Path>& options = topology_.routes(integrator, target);
        for (std::size_t idx = 0; idx < options.size(); ++idx) {
            if (idx == avoid) continue;
            bool clean = true;
            for (const Link& link : path_links(options[idx])) {
                if (failing_links.contains(link) &&
                    !passing_links.contains(link)) {
                    clean = false;
                    break;
                }
            }
            if (clean) return idx;
        }
        return (avoid + round) % options.size();
    };

    for (std::uint32_t round = 1; round <= 3; ++round) {
        diag.rounds_used = round;
        std::uint64_t round_window = round_start;
        auto probe = [&](NodeId integrator, std::size_t route) {
            const Exchange ex = exchange(integrator, target, route, round_start);
            round_window = std::max(round_window, ex.completion_cycle);
            Outcome outcome = Outcome::NoResponse;
            if (ex.observed) {
                outcome = (*ex.observed == expected) ? Outcome::Match
                                                     : Outcome::Mismatch;
            }
            if (devices_.at(integrator).behavior == Behavior::ForgeMatch) {
                outcome = Outcome::Match;  // colluders keep lying on retries
            }
            diag.evidence.push_back({integrator, route, outcome, round});
            if (outcome == Outcome::Match) {
                const Path& path = topology_.routes(integrator, target)[route];
                const std::set<Link> links = path_links(path);
                passing_links.insert(links.begin(), links.end());
            }
            return outcome;
        };

        bool orig_all_ok = true, orig_all_bad = true;
        bool alt_all_ok = true, alt_all_bad = true;
        for (const auto& s : suspects) {
            const std::size_t n_routes =
                topology_.routes(s.integrator_id, target).size();
            if (n_routes == 1) diag.degraded = true;
            const std::size_t alt =
                pick_clean_route(s.integrator_id, s.route_used, round);

            const Outcome on_orig = probe(s.integrator_id, s.route_used);
            (on_orig == Outcome::Match ? orig_all_bad : orig_all_ok) = false;
            const Outcome on_alt = probe(s.integrator_id, alt);
            (on_alt == Outcome::Match ? alt_all_bad : alt_all_ok) = false;
        }

        bool controls_ok = true;
        std::size_t control_count = 0;
        for (const auto& w : witnesses) {
            if (control_count == 2) break;
            const std::size_t route =
                pick_clean_route(w.integrator_id, w.route_used, round);
            if (probe(w.integrator_id, route) != Outcome::Match) {
                controls_ok = false;
            }
            ++control_count;
        }

        const std::uint64_t round_agg = aggregation_cycles(
            std::max<std::size_t>(suspects.size() * 2 + control_count, 1), 1,
            tree.fanout);
        round_start = round_window + round_agg;
        total_cycles_ += round_agg;

        if (alt_all_ok && controls_ok && orig_all_bad) {
            // Fault stays with the original routes, not the chiplet.
            diag.classification = FaultClass::LinkFault;
            for (const Link& link : failing_links) {
                if (!passing_links.contains(link)) {
                    diag.suspect_links.push_back(link);
                }
            }
            last_phase_end_ = round_start;
            return diag;
        }
        if (alt_all_bad && orig_all_bad && !suspects.empty()) {
            // Fault follows the chiplet across disjoint routes.
            diag.classification = FaultClass::ChipletFault;
            last_phase_end_ = round_start;
            return diag;
        }
        if (alt_all_ok && controls_ok && orig_all_ok) {
            if (pending_transient) {
                diag.classification = FaultClass::Transient;
                last_phase_end_ = round_start;
                return diag;
            }
            // Fault vanished; confirm on one more round before declaring it.
            pending_transient = true;
            continue;
        }
        pending_transient = false;  // unstable pattern, keep probing
    }

    diag.classification = FaultClass::ChipletFault;  // unresolved fail-safe
    last_phase_end_ = round_start;
    return diag;
}

AuthReport SipSimulation::run() {
    rng_ = DetRng(session_rng_seed(seed_, ctx_.session_id));
    shares_.clear();
    transcripts_.clear();
    clock_ = 0;
    total_cycles_ = 0;
    window_max_ = 0;

    AuthReport report;
    report.session_id = ctx_.session_id;
    report.seed = seed_;

    const TrustTree tree = cross_authenticate_integrators();
    report.tree = tree;
    distribute_shares(tree);

    const std::vector<NodeId> targets = topology_.ids_with_role(Role::ThirdParty);
    std::map<NodeId, TargetReport> target_reports;
    for (NodeId target : targets) {
        auto [verdict, verdicts] = authenticate_chiplet(tree, target);
        TargetReport tr;
        tr.first_round_verdict = verdict;
        tr.final_verdict = verdict;
        tr.dos_suspected = (verdict == Verdict::Anomalous && verdicts.empty());
        tr.integrator_verdicts = std::move(verdicts);
        target_reports[target] = std::move(tr);
    }

    const std::uint64_t round1_agg =
        aggregation_cycles(tree.root_set.size(), targets.size(), tree.fanout);
    total_cycles_ += round1_agg;
    clock_ = window_max_ + round1_agg;
    std::uint64_t critical = clock_;

    for (auto& [target, tr] : target_reports) {
        if (tr.first_round_verdict == Verdict::Fail) {
            // A quorum of agreeing mismatches is already conclusive.
            FaultDiagnosis diag;
            diag.target_id = target;
            diag.classification = FaultClass::ChipletFault;
            diag.rounds_used = 0;
            for (const auto& iv : tr.integrator_verdicts) {
                if (iv.outcome != Outcome::Match) {
                    diag.evidence.push_back({iv.integrator_id, iv.route_used,
                                             iv.outcome, 0});
                }
            }
            tr.diagnosis = std::move(diag);
        } else if (tr.first_round_verdict == Verdict::Anomalous &&
                   !tr.dos_suspected) {
            tr.diagnosis = localize_fault(tree, target, tr.integrator_verdicts);
            critical = std::max(critical, last_phase_end_);
        }
        if (tr.diagnosis) {
            tr.final_verdict =
                tr.diagnosis->classification == FaultClass::ChipletFault
                    ? Verdict::Fail
                    : Verdict::Pass;
        }
    }

    report.targets = std::move(target_reports);
    report.latency.critical_path_cycles = critical;
    report.latency.total_cycles = std::max(total_cycles_, critical);
    report.latency.clock_ghz = config_.clock_ghz;
    report.latency.wall_time_ns = wall_time_ns(critical, config_.clock_ghz);
    report.transcripts = transcripts_;
    return report;
}

std::string AuthReport::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["session_id"] = session_id;
    j["seed"] = seed;
    j["quorum"] = {{"n", tree.quorum.n}, {"t", tree.quorum.t}};
    j["trust_tree"] = {{"roots", tree.root_set},
                       {"excluded", tree.excluded},
                       {"fanout", tree.fanout}};

    nlohmann::json targets_json = nlohmann::json::object();
    for (const auto& [id, tr] : targets) {
        nlohmann::json t;
        t["first_round_verdict"] = verdict_name(tr.first_round_verdict);
        t["final_verdict"] = verdict_name(tr.final_verdict);
        t["dos_suspected"] = tr.dos_suspected;
        nlohmann::json ivs = nlohmann::json::array();
        for (const auto& iv : tr.integrator_verdicts) {
            nlohmann::json v;
            v["integrator"] = iv.integrator_id;
            v["outcome"] = outcome_name(iv.outcome);
            v["observed"] =
                iv.observed_digest ? iv.observed_digest->hex() : "";
            v["route"] = iv.route_used;
            v["cycles"] = iv.cycles_spent;
            ivs.push_back(std::move(v));
        }
        t["integrator_verdicts"] = std::move(ivs);
        if (tr.diagnosis) {
            const FaultDiagnosis& d = *tr.diagnosis;
            nlohmann::json dj;
            dj["classification"] = fault_class_name(d.classification);
            nlohmann::json links = nlohmann::json::array();
            for (const Link& link : d.suspect_links) {
                links.push_back({link.a, link.b});
            }
            dj["suspect_links"] = std::move(links);
            nlohmann::json evidence = nlohmann::json::array();
            for (const auto& p : d.evidence) {
                evidence.push_back({{"integrator", p.integrator_id},
                                    {"route", p.route},
                                    {"outcome", outcome_name(p.outcome)},
                                    {"round", p.round}});
            }
            dj["evidence"] = std::move(evidence);
            dj["degraded"] = d.degraded;
            if (d.degraded) {
                dj["note"] = "localization degraded: shared-route evidence only";
            }
            dj["rounds_used"] = d.rounds_used;
            t["diagnosis"] = std::move(dj);
        }
        targets_json[std::to_string(id)] = std::move(t);
    }
    j["targets"] = std::move(targets_json);

    j["latency"] = {{"critical_path_cycles", latency.critical_path_cycles},
                    {"total_cycles", latency.total_cycles},
                    {"clock_ghz", latency.clock_ghz},
                    {"wall_time_ns", latency.wall_time_ns}};
    return j.dump(2) + "\n";
}

std::vector<Chiplet> make_devices(const Topology& topology, std::uint64_t seed) {
    std::vector<Chiplet> devices;
    for (const auto& [id, role] : topology.nodes()) {
        Chiplet c;
        c.id = id;
        c.role = role;
        c.puf_secret = derive_puf_secret(seed, id);
        devices.push_back(std::move(c));
    }
    return devices;
}

AuthReport authenticate_sip(Topology topology, std::vector<Chiplet> devices,
                            const ProtocolConfig& config, std::uint64_t seed) {
    Manifest manifest = enroll(devices, seed, config.signature_length_bits);
    SipSimulation sim(std::move(topology), std::move(devices),
                      std::move(manifest), config, seed);
    return sim.run();
}

}  // namespace authentree
