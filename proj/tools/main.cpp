// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
//
// authentree: scenario validation, authentication runs, attack campaigns
// and transcript replay. All commands are deterministic under a fixed seed.
//
// Exit codes: 0 success, 2 config error, 3 protocol failure, 4 I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "authentree/attacks.hpp"
#include "authentree/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitProtocol = 3;
constexpr int kExitIo = 4;

using namespace authentree;

// Seed precedence: --seed flag, then the scenario file, then the
// AUTHENTREE_SEED environment variable. Applied before validation so a
// seedless file still validates when a fallback exists.
void apply_seed(ScenarioConfig& config,
                const std::optional<std::uint64_t>& flag_seed) {
    if (flag_seed) {
        config.seed = *flag_seed;
        config.seed_present = true;
        return;
    }
    if (config.seed_present) return;
    if (const char* env = std::getenv("AUTHENTREE_SEED")) {
        config.seed = std::stoull(env);
        config.seed_present = true;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::ios_base::failure("cannot open: " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return text;
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::ios_base::failure("cannot write: " + path);
    }
    out << content;
}

int cmd_validate(const std::string& path) {
    ScenarioConfig config;
    try {
        config = ScenarioConfig::from_file(path);
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << path << ": parse error: " << e.what() << "\n";
        return kExitConfig;
    }
    apply_seed(config, std::nullopt);
    const std::vector<std::string> problems = config.validate();
    if (problems.empty()) {
        std::cout << path << ": OK (" << config.nodes.size() << " chiplets, "
                  << config.edges.size() << " links)\n";
        return kExitOk;
    }
    for (const std::string& problem : problems) {
        std::cerr << path << ": " << problem << "\n";
    }
    return kExitConfig;
}

void print_summary(const AuthReport& report) {
    std::size_t pass = 0, fail = 0, anomalous = 0;
    for (const auto& [id, tr] : report.targets) {
        switch (tr.final_verdict) {
            case Verdict::Pass: ++pass; break;
            case Verdict::Fail: ++fail; break;
            case Verdict::Anomalous: ++anomalous; break;
        }
    }
    std::cout << "session " << report.session_id << " (seed " << report.seed
              << ")\n";
    std::cout << "trust tree: " << report.tree.root_set.size()
              << " integrators, quorum " << int(report.tree.quorum.t) << "-of-"
              << int(report.tree.quorum.n);
    if (!report.tree.excluded.size()) {
        std::cout << "\n";
    } else {
        std::cout << ", excluded:";
        for (NodeId id : report.tree.excluded) std::cout << " " << id;
        std::cout << "\n";
    }
    if (fail == 0 && anomalous == 0) {
        std::cout << "verdicts: all " << pass << " third-party chiplet"
                  << (pass == 1 ? "" : "s") << " authenticated\n";
    } else {
        std::cout << "verdicts: " << pass << " pass, " << fail << " fail, "
                  << anomalous << " anomalous\n";
    }
    for (const auto& [id, tr] : report.targets) {
        if (!tr.diagnosis) continue;
        const FaultDiagnosis& d = *tr.diagnosis;
        if (d.classification == FaultClass::Authentic) continue;
        std::cout << "  chiplet " << id << ": "
                  << fault_class_name(d.classification);
        if (!d.suspect_links.empty()) {
            std::cout << " on";
            for (const Link& link : d.suspect_links) {
                std::cout << " [" << link.a << "," << link.b << "]";
            }
        }
        if (tr.dos_suspected) std::cout << " (DoS suspected)";
        std::cout << "\n";
    }
    std::cout << "critical path: " << report.latency.critical_path_cycles
              << " cycles (" << report.latency.wall_time_ns << " ns @ "
              << report.latency.clock_ghz << " GHz)\n";
}

int cmd_authenticate(const std::string& path,
                     const std::optional<std::uint64_t>& flag_seed,
                     const std::string& out_dir,
                     const std::string& manifest_out) {
    ScenarioConfig config;
    try {
        config = ScenarioConfig::from_file(path);
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << path << ": parse error: " << e.what() << "\n";
        return kExitConfig;
    }
    apply_seed(config, flag_seed);
    const std::vector<std::string> problems = config.validate();
    if (!problems.empty()) {
        for (const std::string& problem : problems) {
            std::cerr << path << ": " << problem << "\n";
        }
        return kExitConfig;
    }
    const std::uint64_t seed = config.seed;

    try {
        Topology topology = config.build_topology();
        std::vector<Chiplet> devices = config.build_devices(seed);
        Manifest manifest =
            enroll(devices, seed, config.signature_length_bits);
        if (!manifest_out.empty()) {
            write_file(manifest_out, manifest.to_json());
        }
        SipSimulation sim(std::move(topology), std::move(devices),
                          std::move(manifest), config.protocol_config(), seed);
        const AuthReport report = sim.run();

        write_file(out_dir + "/report.json", report.to_json());
        write_file(out_dir + "/transcript.jsonl",
                   transcript_jsonl(report, config.raw_json));
        print_summary(report);
        return kExitOk;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "protocol failure: " << e.what() << "\n";
        return kExitProtocol;
    }
}

int cmd_attack(const std::string& path,
               const std::optional<std::uint64_t>& flag_seed, bool sweep_flag,
               std::optional<std::size_t> trials_flag, bool raw,
               std::size_t jobs, const std::string& out_dir) {
    ScenarioConfig config;
    try {
        config = ScenarioConfig::from_file(path);
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << path << ": parse error: " << e.what() << "\n";
        return kExitConfig;
    }
    apply_seed(config, flag_seed);
    const std::vector<std::string> problems = config.validate();
    if (!problems.empty()) {
        for (const std::string& problem : problems) {
            std::cerr << path << ": " << problem << "\n";
        }
        return kExitConfig;
    }
    if (!config.attack && !sweep_flag) {
        std::cerr << path
                  << ": no attack section; pass --sweep for the default grid\n";
        return kExitConfig;
    }
    const std::uint64_t seed = config.seed;

    try {
        AttackSetup setup = config.attack_setup(seed);
        if (trials_flag) setup.trials = *trials_flag;

        AttackSectionSpec section =
            config.attack ? *config.attack : AttackSectionSpec{};
        const std::vector<HammingReport> reports =
            sweep(setup, section.sweep_lengths, section.attacks, jobs);

        const std::string csv = sweep_csv(reports);
        write_file(out_dir + "/sweep.csv", csv);
        if (raw) {
            write_file(out_dir + "/raw.jsonl", raw_trials_jsonl(reports));
        }
        std::cout << csv;
        return kExitOk;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "protocol failure: " << e.what() << "\n";
        return kExitProtocol;
    }
}

int cmd_replay(const std::string& transcript_path, bool as_attack) {
    ParsedTranscript parsed;
    try {
        parsed = parse_transcript(read_file(transcript_path));
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << transcript_path << ": " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        Topology topology = parsed.scenario.build_topology();
        std::vector<Chiplet> devices = parsed.scenario.build_devices(parsed.seed);
        Manifest manifest = enroll(devices, parsed.seed,
                                   parsed.scenario.signature_length_bits);
        SipSimulation sim(std::move(topology), std::move(devices),
                          std::move(manifest),
                          parsed.scenario.protocol_config(), parsed.seed);
        while (sim.session().session_id < parsed.session_id) {
            sim.begin_session();
        }
        if (sim.session().session_id != parsed.session_id) {
            std::cerr << "transcript session id cannot be reached\n";
            return kExitConfig;
        }

        if (!as_attack) {
            // Audit replay: deterministic re-execution must reproduce the
            // recorded verdicts and message stream exactly.
            const AuthReport rerun = sim.run();
            bool identical = true;
            for (const auto& [id, tr] : rerun.targets) {
                const auto it = parsed.verdicts.find(id);
                if (it == parsed.verdicts.end() ||
                    it->second != verdict_name(tr.final_verdict)) {
                    identical = false;
                }
            }
            if (rerun.targets.size() != parsed.verdicts.size()) {
                identical = false;
            }
            if (rerun.transcripts.size() != parsed.messages.size()) {
                identical = false;
            } else {
                for (std::size_t i = 0; i < parsed.messages.size(); ++i) {
                    const TranscriptRecord& a = rerun.transcripts[i];
                    const TranscriptRecord& b = parsed.messages[i];
                    if (a.msg.src != b.msg.src || a.msg.dst != b.msg.dst ||
                        a.msg.kind != b.msg.kind ||
                        a.msg.payload != b.msg.payload ||
                        a.msg.emit_cycle != b.msg.emit_cycle ||
                        a.outcome != b.outcome) {
                        identical = false;
                        break;
                    }
                }
            }
            if (!identical) {
                std::cerr << "audit replay diverged from the recorded session\n";
                return kExitProtocol;
            }
            std::cout << "audit replay: identical verdicts ("
                      << parsed.verdicts.size() << " targets, "
                      << parsed.messages.size() << " messages)\n";
            return kExitOk;
        }

        // Cross-session replay attack: re-inject recorded responses into a
        // fresh session and count acceptances.
        const SessionContext& fresh = sim.begin_session();
        std::size_t replayed = 0, accepted = 0;
        long long hd_sum = 0;
        for (const TranscriptRecord& rec : parsed.messages) {
            if (rec.msg.kind != MessageKind::Response ||
                rec.msg.payload.size() != 32) {
                continue;
            }
            Digest256 digest;
            std::copy(rec.msg.payload.begin(), rec.msg.payload.end(),
                      digest.bytes.begin());
            const Digest256 expected =
                expected_digest(sim.manifest(), rec.msg.src, fresh);
            ++replayed;
            if (digest == expected) ++accepted;
            hd_sum += hamming_distance(digest, expected);
        }
        std::cout << "replayed " << replayed << " responses into session "
                  << fresh.session_id << ": " << accepted << " accepted";
        if (replayed > 0) {
            std::cout << ", mean HD "
                      << static_cast<double>(hd_sum) /
                             static_cast<double>(replayed);
        }
        std::cout << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "protocol failure: " << e.what() << "\n";
        return kExitProtocol;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "AuthenTree: distributed, tree-structured quorum authentication of "
        "chiplets on a SiP interposer"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string transcript_path;
    std::string out_dir = "out";
    std::string manifest_out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::size_t jobs = 1;
    bool sweep_flag = false;
    bool raw = false;
    bool as_attack = false;

    CLI::App* validate =
        app.add_subcommand("validate", "Check a scenario file");
    validate->add_option("path", scenario_path, "scenario JSON")->required();

    CLI::App* authenticate = app.add_subcommand(
        "authenticate", "Run the full authentication flow for a scenario");
    authenticate->add_option("path", scenario_path, "scenario JSON")->required();
    authenticate->add_option("--seed", seed, "override the scenario seed");
    authenticate->add_option("--out", out_dir,
                             "output directory (report.json, transcript.jsonl)");
    authenticate->add_option("--manifest-out", manifest_out,
                             "also write the enrollment manifest JSON");

    CLI::App* attack = app.add_subcommand(
        "attack", "Run the attack harness (Hamming-distance sweeps)");
    attack->add_option("path", scenario_path, "scenario JSON")->required();
    attack->add_option("--seed", seed, "override the scenario seed");
    attack->add_option("--trials", trials, "trials per sweep cell");
    attack->add_flag("--sweep", sweep_flag,
                     "run the default sweep grid when the scenario has no "
                     "attack section");
    attack->add_flag("--raw", raw, "also dump per-trial JSONL");
    attack->add_option("--jobs", jobs,
                       "fan independent sweep cells across N workers");
    attack->add_option("--out", out_dir, "output directory (sweep.csv)");

    CLI::App* replay = app.add_subcommand(
        "replay", "Audit-replay a transcript, or re-inject it as an attack");
    replay->add_option("path", transcript_path, "transcript JSONL")->required();
    replay->add_flag("--as-attack", as_attack,
                     "cross-session replay attack instead of audit replay");

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) return cmd_validate(scenario_path);
    if (authenticate->parsed()) {
        return cmd_authenticate(scenario_path, seed, out_dir, manifest_out);
    }
    if (attack->parsed()) {
        return cmd_attack(scenario_path, seed, sweep_flag, trials, raw, jobs,
                          out_dir);
    }
    if (replay->parsed()) return cmd_replay(transcript_path, as_attack);
    return kExitConfig;
}
