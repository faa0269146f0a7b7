// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "authentree/attacks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace authentree {

namespace {

double mean_of(const std::vector<int>& xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) /
           static_cast<double>(xs.size());
}

/// Engine factory: honest devices, enrolled manifest.
SipSimulation make_sim(const AttackSetup& setup, const ProtocolConfig& config) {
    std::vector<Chiplet> devices = make_devices(setup.topology, setup.seed);
    Manifest manifest = enroll(devices, setup.seed, config.signature_length_bits);
    return SipSimulation(setup.topology, std::move(devices),
                         std::move(manifest), config, setup.seed);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

Digest256 digest_of_bytes(const Bytes& data) { return sha256(data); }

}  // namespace

double HammingReport::mean() const { return mean_of(distances); }

double HammingReport::stddev() const {
    if (distances.size() <= 1) return 0.0;
    const double m = mean();
    double acc = 0.0;
    for (int d : distances) {
        acc += (d - m) * (d - m);
    }
    return std::sqrt(acc / static_cast<double>(distances.size() - 1));
}

int HammingReport::min() const {
    return distances.empty()
               ? 0
               : *std::min_element(distances.begin(), distances.end());
}

int HammingReport::max() const {
    return distances.empty()
               ? 0
               : *std::max_element(distances.begin(), distances.end());
}

double HammingReport::fail_rate() const {
    if (trials == 0) return 0.0;
    std::size_t pass = 0;
    const auto it = verdicts.find("pass");
    if (it != verdicts.end()) pass = it->second;
    return static_cast<double>(trials - pass) / static_cast<double>(trials);
}

double ReplayReport::mean_hd() const { return mean_of(distances); }

HammingReport attack_bit_flip(const AttackSetup& setup, std::size_t k) {
    const std::size_t sig_bits = setup.config.signature_length_bits;
    if (k < 1 || k > sig_bits) {
        throw std::invalid_argument("flip count out of range");
    }

    HammingReport report;
    report.attack = "fault_injection";
    report.signature_length_bits = sig_bits;
    report.trials = setup.trials;

    SipSimulation sim = make_sim(setup, setup.config);
    const NodeId victim = setup.target;

    for (std::size_t trial = 0; trial < setup.trials; ++trial) {
        const SessionContext& ctx = sim.begin_session();
        DetRng trial_rng(derive_seed(setup.seed, trial));
        sim.device(victim).signature_tamper =
            trial_rng.distinct_positions(k, sig_bits);

        const AuthReport run = sim.run();
        const TargetReport& tr = run.targets.at(victim);
        report.verdicts[verdict_name(tr.final_verdict)]++;

        const Signature& genuine = sim.manifest().entries.at(victim);
        Signature tampered = genuine;
        tampered.bytes =
            flip_bits(genuine.bytes, sim.device(victim).signature_tamper);
        const Digest256 reference = session_digest(genuine, ctx, victim);
        const Digest256 observed = session_digest(tampered, ctx, victim);
        report.distances.push_back(hamming_distance(observed, reference));
    }
    sim.device(victim).signature_tamper.clear();
    return report;
}

HammingReport attack_share_removal(const AttackSetup& setup, RemovalMode mode) {
    // Share-disruption experiments run n-of-n: every contribution essential.
    ProtocolConfig config = setup.config;
    const std::size_t n_integrators =
        setup.topology.ids_with_role(Role::Integrator).size();
    config.quorum_t = static_cast<std::uint8_t>(n_integrators);

    HammingReport report;
    report.attack = (mode == RemovalMode::Withhold) ? "removal" : "dos";
    report.signature_length_bits = config.signature_length_bits;
    report.trials = setup.trials;

    SipSimulation sim = make_sim(setup, config);

    for (std::size_t trial = 0; trial < setup.trials; ++trial) {
        sim.begin_session();
        const TrustTree tree = sim.cross_authenticate_integrators();
        sim.distribute_shares(tree);

        const NodeId victim = setup.victim_integrator != 0
                                  ? setup.victim_integrator
                                  : tree.root_set.at(1);
        if (std::find(tree.root_set.begin(), tree.root_set.end(), victim) ==
            tree.root_set.end()) {
            throw std::invalid_argument("victim integrator is not in the tree");
        }

        // Degraded-aggregate measurement for the Hamming sweep.
        std::vector<Share> pool = sim.pooled_shares(tree, setup.target);
        const Bytes true_secret =
            reconstruct_degraded(pool, tree.quorum);  // untouched baseline
        DetRng trial_rng(derive_seed(setup.seed, 0x10000 + trial));
        const std::size_t victim_rank = static_cast<std::size_t>(
            std::find(tree.root_set.begin(), tree.root_set.end(), victim) -
            tree.root_set.begin());
        for (Share& share : pool) {
            if (share.index != victim_rank + 1) continue;
            if (mode == RemovalMode::Withhold) {
                std::fill(share.payload.begin(), share.payload.end(), 0);
            } else {
                share.payload = trial_rng.bytes(share.payload.size());
            }
        }
        const Bytes degraded = reconstruct_degraded(pool, tree.quorum);
        report.distances.push_back(hamming_distance(
            digest_of_bytes(degraded), digest_of_bytes(true_secret)));

        // Strict-mode verdict: the victim's shares never reach the pool.
        sim.withhold_shares(victim);
        const auto [verdict, ivs] = sim.authenticate_chiplet(tree, setup.target);
        report.verdicts[verdict_name(verdict)]++;
    }
    return report;
}

ReplayReport attack_replay(const AttackSetup& setup) {
    ReplayReport report;
    SipSimulation sim = make_sim(setup, setup.config);

    for (std::size_t trial = 0; trial < setup.trials; ++trial) {
        sim.begin_session();
        const AuthReport recorded = sim.run();
        if (!recorded.all_pass()) {
            throw std::runtime_error("replay attack requires a Pass transcript");
        }
        ++report.sessions;

        struct Captured {
            NodeId target;
            Digest256 digest;
        };
        std::vector<Captured> captured;
        for (const TranscriptRecord& rec : recorded.transcripts) {
            if (rec.msg.kind != MessageKind::Response) continue;
            if (rec.msg.payload.size() != 32) continue;
            Captured c;
            c.target = rec.msg.src;
            std::memcpy(c.digest.bytes.data(), rec.msg.payload.data(), 32);
            captured.push_back(c);

            // Same-session duplicate delivery: idempotent, flagged.
            const Digest256 same_session_expected =
                expected_digest(sim.manifest(), c.target, sim.session());
            if (c.digest == same_session_expected) {
                ++report.duplicates_accepted;
            }
        }

        const SessionContext& fresh = sim.begin_session();
        for (const Captured& c : captured) {
            const Digest256 expected =
                expected_digest(sim.manifest(), c.target, fresh);
            ++report.replayed_messages;
            if (c.digest == expected) {
                ++report.acceptances;
            }
            report.distances.push_back(hamming_distance(c.digest, expected));
        }
    }
    return report;
}

CloneReport attack_clone(const AttackSetup& setup, bool perfect_clone) {
    CloneReport report;
    SipSimulation sim = make_sim(setup, setup.config);

    Chiplet& victim = sim.device(setup.target);
    if (perfect_clone) {
        // Outside the threat model: PUFs are unclonable. Kept as a probe of
        // the model limit.
        victim.puf_secret = derive_puf_secret(setup.seed, setup.target);
        report.perfect_clone_model_limit = true;
    } else {
        victim.puf_secret = derive_clone_secret(setup.seed, setup.target);
    }
    victim.honest = perfect_clone;

    const AuthReport run = sim.run();
    const TargetReport& tr = run.targets.at(setup.target);
    report.final_verdict = tr.final_verdict;
    if (tr.diagnosis) {
        report.classification = tr.diagnosis->classification;
    }
    if (tr.final_verdict == Verdict::Pass) {
        ++report.pass_count;
    }
    return report;
}

std::vector<HammingReport> sweep(const AttackSetup& base,
                                 const std::vector<std::size_t>& lengths,
                                 const std::vector<std::string>& attacks,
                                 std::size_t jobs) {
    if (lengths.empty()) {
        throw std::invalid_argument("sweep needs at least one signature length");
    }
    std::vector<std::function<HammingReport()>> cells;
    for (const std::string& attack : attacks) {
        for (std::size_t bits : lengths) {
            AttackSetup setup = base;
            setup.config.signature_length_bits = bits;
            if (attack == "fault_injection") {
                cells.emplace_back(
                    [setup] { return attack_bit_flip(setup, 1); });
            } else if (attack == "removal") {
                cells.emplace_back([setup] {
                    return attack_share_removal(setup, RemovalMode::Withhold);
                });
            } else if (attack == "dos") {
                cells.emplace_back([setup] {
                    return attack_share_removal(setup, RemovalMode::Corrupt);
                });
            } else if (attack == "replay") {
                cells.emplace_back([setup, bits] {
                    const ReplayReport replayed = attack_replay(setup);
                    HammingReport row;
                    row.attack = "replay";
                    row.signature_length_bits = bits;
                    row.distances = replayed.distances;
                    row.trials = replayed.replayed_messages;
                    row.verdicts["pass"] = replayed.acceptances;
                    row.verdicts["rejected"] =
                        replayed.replayed_messages - replayed.acceptances;
                    return row;
                });
            } else {
                throw std::invalid_argument(
                    "unknown attack: " + attack +
                    " (known: fault_injection, removal, dos, replay)");
            }
        }
    }

    std::vector<HammingReport> reports(cells.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            reports[i] = cells[i]();
        }
        return reports;
    }
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= cells.size()) return;
            reports[i] = cells[i]();
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < std::min(jobs, cells.size()); ++j) {
        pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
        t.join();
    }
    return reports;
}

std::string sweep_csv(const std::vector<HammingReport>& reports) {
    std::string csv = "attack,length_bits,mean_hd,std_hd,min,max,fail_rate\n";
    for (const HammingReport& r : reports) {
        csv += r.attack;
        csv += ',';
        csv += std::to_string(r.signature_length_bits);
        csv += ',';
        csv += format_double(r.mean());
        csv += ',';
        csv += format_double(r.stddev());
        csv += ',';
        csv += std::to_string(r.min());
        csv += ',';
        csv += std::to_string(r.max());
        csv += ',';
        csv += format_double(r.fail_rate());
        csv += '\n';
    }
    return csv;
}

std::string raw_trials_jsonl(const std::vector<HammingReport>& reports) {
    std::string out;
    for (const HammingReport& r : reports) {
        // Verdict counts are aggregate; per-trial lines carry the distances.
        for (std::size_t i = 0; i < r.distances.size(); ++i) {
            nlohmann::json j;
            j["attack"] = r.attack;
            j["length_bits"] = r.signature_length_bits;
            j["trial"] = i;
            j["hd"] = r.distances[i];
            out += j.dump();
            out += '\n';
        }
    }
    return out;
}

AttackSetup default_attack_setup(std::uint64_t seed, std::size_t trials) {
    AttackSetup setup;
    setup.topology = make_star({1, 2, 3, 4}, {11, 12, 13, 14});
    setup.seed = seed;
    setup.target = 11;
    setup.victim_integrator = 2;
    setup.trials = trials;
    return setup;
}

}  // namespace authentree
