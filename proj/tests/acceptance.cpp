// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Acceptance suite: one pass/fail line per criterion. Every tolerance is
// pinned here. Usage: acceptance <path-to-cli> <source-dir>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "authentree/attacks.hpp"
#include "authentree/scenario.hpp"

using namespace authentree;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, bool ok,
               const std::string& detail) {
    std::printf("[%s] criterion %d: %s: %s\n", ok ? "PASS" : "FAIL", number,
                name.c_str(), detail.c_str());
    if (!ok) ++g_failures;
}

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Hash conformance: FIPS 180-4 short-message vectors, bit-exact.

void criterion_1(const std::string& source_dir) {
    std::size_t checked = 0, exact = 0;
    bool saw_empty = false, saw_abc = false;

    std::ifstream in(source_dir + "/tests/vectors/sha256_fips.txt");
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string input_hex, digest_hex;
        fields >> input_hex >> digest_hex;
        const Bytes input = input_hex == "-" ? Bytes{} : from_hex(input_hex);
        if (input.empty()) saw_empty = true;
        if (input == Bytes{'a', 'b', 'c'}) saw_abc = true;
        ++checked;
        if (sha256(input).hex() == digest_hex) ++exact;
    }
    // The long-message vector is asserted directly.
    ++checked;
    if (sha256(Bytes(1000000, 'a')).hex() ==
        "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0") {
        ++exact;
    }

    const bool ok = checked >= 10 && exact == checked && saw_empty && saw_abc;
    criterion(1, "SHA-256 FIPS conformance", ok,
              std::to_string(exact) + "/" + std::to_string(checked) +
                  " vectors bit-exact");
}

// ---------------------------------------------------------------------------
// 2. Avalanche / fault injection: single-bit flips across signature lengths.

void criterion_2() {
    bool ok = true;
    std::string detail;
    for (std::size_t bits : {64, 128, 256, 512}) {
        AttackSetup setup = default_attack_setup(2026, 1000);
        setup.config.signature_length_bits = bits;
        const HammingReport report = attack_bit_flip(setup, 1);
        const double mean = report.mean();
        const bool in_band = mean >= 120.0 && mean <= 136.0;
        const bool no_pass = report.verdicts.count("pass") == 0;
        ok = ok && in_band && no_pass && report.trials == 1000;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%zu:%.1f ", bits, mean);
        detail += buf;
    }
    criterion(2, "fault-injection avalanche (1000 trials/length)", ok,
              "mean HD per length " + detail + "all verdicts non-Pass");
}

// ---------------------------------------------------------------------------
// 3. Share removal / DoS: strict mode rejects, degraded aggregate avalanche.

void criterion_3() {
    bool ok = true;
    std::string detail;
    for (std::size_t bits : {64, 128, 256, 512}) {
        AttackSetup setup = default_attack_setup(31, 1000);
        setup.config.signature_length_bits = bits;
        const HammingReport report =
            attack_share_removal(setup, RemovalMode::Withhold);
        const double mean = report.mean();
        ok = ok && report.verdicts.count("pass") == 0 &&
             report.fail_rate() == 1.0 && mean >= 120.0 && mean <= 136.0;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%zu:%.1f ", bits, mean);
        detail += buf;
    }
    // Any single victim: strict mode never passes.
    for (NodeId victim : {1, 2, 3, 4}) {
        AttackSetup setup = default_attack_setup(32, 100);
        setup.victim_integrator = victim;
        const HammingReport report =
            attack_share_removal(setup, RemovalMode::Withhold);
        ok = ok && report.verdicts.count("pass") == 0;
    }
    criterion(3, "share removal / DoS", ok,
              "degraded-aggregate mean HD " + detail +
                  "strict mode 100% non-Pass for every victim");
}

// ---------------------------------------------------------------------------
// 4. Replay rejection: 100 recorded Pass transcripts, zero acceptances.

void criterion_4() {
    AttackSetup setup = default_attack_setup(4, 100);
    const ReplayReport report = attack_replay(setup);
    const bool ok = report.sessions == 100 && report.acceptances == 0 &&
                    report.replayed_messages > 0;
    criterion(4, "replay rejection", ok,
              std::to_string(report.replayed_messages) + " responses from " +
                  std::to_string(report.sessions) + " sessions replayed, " +
                  std::to_string(report.acceptances) + " accepted");
}

// ---------------------------------------------------------------------------
// 5. Threshold security: exhaustive collusion and reconstruction enumeration.

void subsets_of(std::size_t n, std::size_t k,
                std::vector<std::vector<std::size_t>>& out) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < n; ++i) {
            if (pick[i]) subset.push_back(i);
        }
        out.push_back(std::move(subset));
    } while (std::prev_permutation(pick.begin(), pick.end()));
}

void criterion_5() {
    bool ok = true;
    std::size_t collusion_runs = 0, reconstructions = 0;

    for (std::size_t n : {3, 4, 5}) {
        const auto t = static_cast<std::uint8_t>((2 * n + 2) / 3);

        // (a) Forged Pass is impossible for every dishonest subset < t.
        std::vector<NodeId> integrators;
        for (std::size_t i = 0; i < n; ++i) integrators.push_back(i + 1);
        for (std::size_t d = 0; d < t; ++d) {
            std::vector<std::vector<std::size_t>> subsets;
            subsets_of(n, d, subsets);
            for (const auto& subset : subsets) {
                const std::uint64_t seed = 50 + n;
                Topology topo = make_star(integrators, {101});
                std::vector<Chiplet> devices = make_devices(topo, seed);
                for (Chiplet& c : devices) {
                    if (c.id == 101) {
                        c.puf_secret = derive_clone_secret(seed, 101);
                        c.honest = false;
                    }
                    for (std::size_t idx : subset) {
                        if (c.id == integrators[idx]) {
                            c.behavior = Behavior::ForgeMatch;
                            c.honest = false;
                        }
                    }
                }
                ProtocolConfig config;
                config.quorum_t = t;
                const AuthReport report =
                    authenticate_sip(topo, devices, config, seed);
                ++collusion_runs;
                if (report.targets.at(101).final_verdict == Verdict::Pass) {
                    ok = false;
                }
            }
        }

        // (b) Every share subset of size >= t reconstructs exactly.
        DetRng rng(60 + n);
        const Bytes secret = rng.bytes(32);
        const SharingPolicy policy{static_cast<std::uint8_t>(n), t};
        const auto shares = split(secret, policy, rng);
        for (std::size_t size = t; size <= n; ++size) {
            std::vector<std::vector<std::size_t>> subsets;
            subsets_of(n, size, subsets);
            for (const auto& subset : subsets) {
                std::vector<Share> picked;
                for (std::size_t i : subset) picked.push_back(shares[i]);
                ++reconstructions;
                if (reconstruct(picked, policy) != secret) ok = false;
            }
        }
    }
    criterion(5, "threshold security (n in {3,4,5}, t = ceil(2n/3))", ok,
              std::to_string(collusion_runs) +
                  " collusion scenarios never Pass; " +
                  std::to_string(reconstructions) +
                  " >=t share subsets reconstruct");
}

// ---------------------------------------------------------------------------
// 6. Fault localization matrix: 4 fault kinds x 3 topologies.

struct MatrixOutcome {
    bool ok = true;
    std::string failure;
};

// A link on exactly one root's primary route to `target`, absent from every
// cross-authentication primary and from other roots' primaries to the same
// target, so only one integrator's round-1 view is disturbed.
std::optional<Link> find_isolated_link(const Topology& topo, NodeId target) {
    const std::vector<NodeId> roots = topo.ids_with_role(Role::Integrator);
    std::set<Link> reserved;
    for (NodeId i : roots) {
        for (NodeId j : roots) {
            if (i == j) continue;
            const Path& p = topo.routes(i, j)[0];
            for (std::size_t k = 0; k + 1 < p.size(); ++k) {
                reserved.emplace(p[k], p[k + 1]);
            }
        }
    }
    for (NodeId root : roots) {
        const Path& primary = topo.routes(root, target)[0];
        for (std::size_t k = 0; k + 1 < primary.size(); ++k) {
            const Link candidate(primary[k], primary[k + 1]);
            if (reserved.contains(candidate)) continue;
            bool shared = false;
            for (NodeId other : roots) {
                if (other == root) continue;
                const Path& other_primary = topo.routes(other, target)[0];
                for (std::size_t m = 0; m + 1 < other_primary.size(); ++m) {
                    if (Link(other_primary[m], other_primary[m + 1]) ==
                        candidate) {
                        shared = true;
                    }
                }
            }
            if (!shared) return candidate;
        }
    }
    return std::nullopt;
}

MatrixOutcome run_matrix_case(const std::string& topo_name,
                              const Topology& base,
                              const std::string& fault_kind) {
    MatrixOutcome out;
    const std::uint64_t seed = 600;
    const NodeId target = 11;
    auto fail = [&](const std::string& why) {
        out.ok = false;
        out.failure = topo_name + "/" + fault_kind + ": " + why;
        return out;
    };

    Topology topo = base;
    std::vector<Chiplet> devices = make_devices(topo, seed);
    FaultClass expected = FaultClass::Authentic;

    if (fault_kind == "counterfeit") {
        for (Chiplet& c : devices) {
            if (c.id == target) {
                c.puf_secret = derive_clone_secret(seed, target);
                c.honest = false;
            }
        }
        expected = FaultClass::ChipletFault;
    } else {
        const auto link = find_isolated_link(topo, target);
        if (!link) return fail("no isolated link available");
        if (fault_kind == "corrupting") {
            topo.inject_link_fault(*link, LinkState::corrupting({0}));
            expected = FaultClass::LinkFault;
        } else if (fault_kind == "dropping") {
            topo.inject_link_fault(*link, LinkState::dropping());
            expected = FaultClass::LinkFault;
        } else {  // transient window sized from a clean dry run
            const AuthReport dry =
                authenticate_sip(base, make_devices(base, seed), {}, seed);
            topo.schedule_fault(*link, LinkState::corrupting({0}), 0,
                                dry.latency.critical_path_cycles);
            expected = FaultClass::Transient;
        }
    }

    const AuthReport report = authenticate_sip(topo, devices, {}, seed);
    const TargetReport& tr = report.targets.at(target);

    if (expected == FaultClass::ChipletFault) {
        if (tr.final_verdict != Verdict::Fail || !tr.diagnosis ||
            tr.diagnosis->classification != FaultClass::ChipletFault) {
            return fail("counterfeit not classified as chiplet fault");
        }
        for (const auto& [id, other] : report.targets) {
            if (id != target && other.final_verdict != Verdict::Pass) {
                return fail("honest chiplet rejected alongside counterfeit");
            }
        }
        return out;
    }

    // Link/transient ground truth: every diagnosis matches, nothing rejected.
    if (!tr.diagnosis || tr.diagnosis->classification != expected) {
        return fail("target diagnosis is " +
                    (tr.diagnosis
                         ? fault_class_name(tr.diagnosis->classification)
                         : std::string("absent")));
    }
    for (const auto& [id, other] : report.targets) {
        if (other.final_verdict != Verdict::Pass) {
            return fail("chiplet " + std::to_string(id) +
                        " rejected for an interposer fault");
        }
        if (other.diagnosis &&
            other.diagnosis->classification != expected &&
            other.diagnosis->classification != FaultClass::Authentic) {
            return fail("chiplet " + std::to_string(id) + " classified as " +
                        fault_class_name(other.diagnosis->classification));
        }
    }
    return out;
}

void criterion_6() {
    const std::vector<NodeId> integrators{1, 2, 3, 4};
    const std::vector<NodeId> third_parties{11, 12, 13, 14};
    const std::vector<std::pair<std::string, Topology>> topologies{
        {"star", make_star(integrators, third_parties)},
        {"mesh", make_mesh(integrators, third_parties)},
        {"clique", make_clique_spokes(integrators, third_parties)}};
    const std::vector<std::string> faults{"counterfeit", "corrupting",
                                          "dropping", "transient"};
    std::size_t passed = 0;
    std::string first_failure;
    for (const auto& [name, topo] : topologies) {
        for (const std::string& fault : faults) {
            const MatrixOutcome out = run_matrix_case(name, topo, fault);
            if (out.ok) {
                ++passed;
            } else if (first_failure.empty()) {
                first_failure = out.failure;
            }
        }
    }
    criterion(6, "fault localization matrix", passed == 12,
              std::to_string(passed) + "/12 cases match ground truth" +
                  (first_failure.empty() ? "" : "; first: " + first_failure));
}

// ---------------------------------------------------------------------------
// 7. Latency model: hand-traced single target, 64-chiplet parallel budget.

void criterion_7() {
    // Single target, direct links, flat aggregation: 1 challenge link +
    // 96-cycle hash + 1 response link + 1 comparator cycle = 99.
    ProtocolConfig flat;
    flat.fanout = 4;
    Topology single = make_star({1, 2, 3, 4}, {101});
    const AuthReport one =
        authenticate_sip(single, make_devices(single, 70), flat, 70);
    const bool single_ok = one.latency.critical_path_cycles == 99 &&
                           latency_model(one, 1.0).second == 99.0;

    std::vector<NodeId> many;
    for (NodeId id = 101; id < 165; ++id) many.push_back(id);
    Topology big = make_star({1, 2, 3, 4}, many);
    const AuthReport sixty_four =
        authenticate_sip(big, make_devices(big, 71), {}, 71);
    const bool parallel_ok = sixty_four.all_pass() &&
                             sixty_four.latency.critical_path_cycles < 1000 &&
                             latency_model(sixty_four, 1.0).second < 1000.0;

    const bool hash_ok = wall_time_ns(96, 1.0) == 96.0;

    criterion(7, "latency model", single_ok && parallel_ok && hash_ok,
              "single target " +
                  std::to_string(one.latency.critical_path_cycles) +
                  " cycles (expected 99); 64 chiplets " +
                  std::to_string(sixty_four.latency.critical_path_cycles) +
                  " cycles (< 1000, i.e. < 1 us at 1 GHz)");
}

// ---------------------------------------------------------------------------
// 8. Determinism: every CLI command, run twice, byte-identical outputs.

struct CliRun {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

CliRun run_cli(const std::string& cli, const std::string& args,
               const std::string& capture_path) {
    const std::string cmd = cli + " " + args + " > " + capture_path + " 2>&1";
    const int status = std::system(cmd.c_str());
    CliRun run;
    run.exit_code = WEXITSTATUS(status);
    run.output = read_all(capture_path);
    return run;
}

void criterion_8(const std::string& cli, const std::string& source_dir) {
    namespace fs = std::filesystem;
    const fs::path work = fs::temp_directory_path() / "authentree_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);
    const std::string scenarios = source_dir + "/scenarios";

    bool ok = true;
    std::string detail;
    auto expect = [&](bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (detail.empty()) detail = "first failure: " + what;
        }
    };

    // validate
    const CliRun v1 = run_cli(cli, "validate " + scenarios + "/cva6.json",
                              (work / "v1.txt").string());
    const CliRun v2 = run_cli(cli, "validate " + scenarios + "/cva6.json",
                              (work / "v2.txt").string());
    expect(v1.exit_code == 0 && v1.output == v2.output, "validate");

    // authenticate: identical stdout and identical artifacts
    for (const std::string name :
         {"cva6", "counterfeit", "link_fault", "single_target"}) {
        const std::string base = scenarios + "/" + name + ".json";
        const CliRun a1 = run_cli(cli,
                                  "authenticate " + base + " --out " +
                                      (work / (name + "_a")).string(),
                                  (work / (name + "_a.txt")).string());
        const CliRun a2 = run_cli(cli,
                                  "authenticate " + base + " --out " +
                                      (work / (name + "_b")).string(),
                                  (work / (name + "_b.txt")).string());
        expect(a1.exit_code == 0 && a1.output == a2.output,
               "authenticate " + name + " stdout");
        for (const std::string artifact : {"report.json", "transcript.jsonl"}) {
            expect(read_all((work / (name + "_a") / artifact).string()) ==
                       read_all((work / (name + "_b") / artifact).string()),
                   "authenticate " + name + " " + artifact);
        }
    }

    // attack sweep (trimmed trials for runtime; the byte-determinism
    // contract is trial-count independent)
    const CliRun k1 = run_cli(cli,
                              "attack " + scenarios +
                                  "/cva6.json --trials 5 --raw --out " +
                                  (work / "atk_a").string(),
                              (work / "atk_a.txt").string());
    const CliRun k2 = run_cli(cli,
                              "attack " + scenarios +
                                  "/cva6.json --trials 5 --raw --out " +
                                  (work / "atk_b").string(),
                              (work / "atk_b.txt").string());
    expect(k1.exit_code == 0 && k1.output == k2.output, "attack stdout");
    expect(read_all((work / "atk_a" / "sweep.csv").string()) ==
               read_all((work / "atk_b" / "sweep.csv").string()),
           "attack sweep.csv");
    expect(read_all((work / "atk_a" / "raw.jsonl").string()) ==
               read_all((work / "atk_b" / "raw.jsonl").string()),
           "attack raw.jsonl");

    // replay: audit mode reproduces, attack mode accepts nothing
    const std::string transcript =
        (work / "cva6_a" / "transcript.jsonl").string();
    const CliRun r1 =
        run_cli(cli, "replay " + transcript, (work / "r1.txt").string());
    const CliRun r2 =
        run_cli(cli, "replay " + transcript, (work / "r2.txt").string());
    expect(r1.exit_code == 0 && r1.output == r2.output, "replay audit");
    expect(r1.output.find("identical verdicts") != std::string::npos,
           "replay audit verdicts");
    const CliRun ra = run_cli(cli, "replay " + transcript + " --as-attack",
                              (work / "ra.txt").string());
    expect(ra.exit_code == 0 &&
               ra.output.find(" 0 accepted") != std::string::npos,
           "replay --as-attack acceptances");

    // exit-code contract: config errors exit 2
    const fs::path broken = work / "broken.json";
    std::ofstream(broken.string()) << "{\"schema\": 1}";
    const CliRun bad = run_cli(cli, "validate " + broken.string(),
                               (work / "bad.txt").string());
    expect(bad.exit_code == 2, "config error exit code");

    criterion(8, "CLI determinism", ok,
              ok ? "validate/authenticate/attack/replay byte-identical "
                   "across reruns"
                 : detail);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <cli-path> <source-dir>\n");
        return 2;
    }
    const std::string cli = argv[1];
    const std::string source_dir = argv[2];

    criterion_1(source_dir);
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8(cli, source_dir);

    if (g_failures != 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 8 acceptance criteria passed\n");
    return 0;
}
