// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include "authentree/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace authentree {

namespace {

using nlohmann::json;

LinkState parse_link_state(const json& j) {
    const std::string kind = j.at("state").get<std::string>();
    if (kind == "healthy") return LinkState::healthy();
    if (kind == "dropping") return LinkState::dropping();
    if (kind == "corrupting") {
        return LinkState::corrupting(
            j.at("bits").get<std::vector<std::size_t>>());
    }
    if (kind == "delaying") {
        return LinkState::delaying(j.at("cycles").get<std::uint32_t>());
    }
    throw std::invalid_argument("unknown link state: " + kind);
}

Role parse_role(const std::string& role) {
    if (role == "integrator") return Role::Integrator;
    if (role == "third_party") return Role::ThirdParty;
    throw std::invalid_argument("unknown role: " + role);
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
    const json j = json::parse(text);
    if (!j.contains("schema") || j.at("schema").get<int>() != 1) {
        throw std::invalid_argument("scenario schema must be 1");
    }

    ScenarioConfig cfg;
    cfg.raw_json = j.dump();
    if (j.contains("seed")) {
        cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.seed_present = true;
    }

    const json& topo = j.at("topology");
    for (const json& node : topo.at("nodes")) {
        NodeSpec spec;
        spec.id = node.at("id").get<NodeId>();
        spec.role = parse_role(node.at("role").get<std::string>());
        if (node.contains("behavior")) {
            spec.behavior = node.at("behavior").get<std::string>();
        }
        cfg.nodes.push_back(spec);
    }
    for (const json& edge : topo.at("edges")) {
        cfg.edges.emplace_back(edge.at(0).get<NodeId>(),
                               edge.at(1).get<NodeId>());
    }
    if (topo.contains("faults")) {
        for (const json& fault : topo.at("faults")) {
            FaultSpec spec;
            spec.link = Link(fault.at("link").at(0).get<NodeId>(),
                             fault.at("link").at(1).get<NodeId>());
            spec.state = parse_link_state(fault);
            if (fault.contains("from_cycle")) {
                spec.from_cycle = fault.at("from_cycle").get<std::uint64_t>();
            }
            if (fault.contains("to_cycle")) {
                spec.to_cycle = fault.at("to_cycle").get<std::uint64_t>();
            }
            cfg.faults.push_back(spec);
        }
    }
    if (topo.contains("link_latency_cycles")) {
        cfg.link_latency_cycles =
            topo.at("link_latency_cycles").get<std::uint32_t>();
    }

    if (j.contains("protocol")) {
        const json& proto = j.at("protocol");
        if (proto.contains("quorum") && !proto.at("quorum").is_string()) {
            cfg.quorum_t = proto.at("quorum").at("t").get<std::uint8_t>();
            if (proto.at("quorum").contains("n")) {
                cfg.quorum_n = proto.at("quorum").at("n").get<std::uint8_t>();
            }
        }
        if (proto.contains("signature_length_bits")) {
            cfg.signature_length_bits =
                proto.at("signature_length_bits").get<std::size_t>();
        }
        if (proto.contains("fanout")) {
            cfg.fanout = proto.at("fanout").get<std::uint32_t>();
        }
        if (proto.contains("clock_ghz")) {
            cfg.clock_ghz = proto.at("clock_ghz").get<double>();
        }
        if (proto.contains("hash_cycles")) {
            cfg.hash_cycles = proto.at("hash_cycles").get<std::uint32_t>();
        }
        if (proto.contains("puf_bit_error_rate")) {
            cfg.puf_bit_error_rate =
                proto.at("puf_bit_error_rate").get<double>();
        }
    }

    if (j.contains("attack")) {
        const json& attack = j.at("attack");
        AttackSectionSpec spec;
        if (attack.contains("sweep_lengths")) {
            spec.sweep_lengths =
                attack.at("sweep_lengths").get<std::vector<std::size_t>>();
        }
        if (attack.contains("attacks")) {
            spec.attacks =
                attack.at("attacks").get<std::vector<std::string>>();
        }
        if (attack.contains("trials")) {
            spec.trials = attack.at("trials").get<std::size_t>();
        }
        if (attack.contains("target")) {
            spec.target = attack.at("target").get<NodeId>();
        }
        if (attack.contains("victim_integrator")) {
            spec.victim_integrator =
                attack.at("victim_integrator").get<NodeId>();
        }
        cfg.attack = spec;
    }
    return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::ios_base::failure("cannot open scenario file: " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

std::vector<std::string> ScenarioConfig::validate() const {
    std::vector<std::string> problems;

    if (!seed_present) {
        problems.push_back("seed: missing (required for reproducibility)");
    }

    std::set<NodeId> ids;
    std::size_t integrators = 0;
    for (const NodeSpec& node : nodes) {
        if (!ids.insert(node.id).second) {
            problems.push_back("nodes: duplicate chiplet id " +
                               std::to_string(node.id));
        }
        if (node.role == Role::Integrator) ++integrators;
        if (node.behavior != "honest" && node.behavior != "clone" &&
            node.behavior != "silent" && node.behavior != "forge_match") {
            problems.push_back("nodes: unknown behavior '" + node.behavior +
                               "' on id " + std::to_string(node.id));
        }
    }
    if (integrators < 3) {
        problems.push_back("nodes: need at least 3 integrators, have " +
                           std::to_string(integrators));
    }

    std::set<Link> links;
    for (const auto& [a, b] : edges) {
        if (!ids.contains(a) || !ids.contains(b)) {
            problems.push_back("edges: endpoint not a node in [" +
                               std::to_string(a) + "," + std::to_string(b) + "]");
            continue;
        }
        if (a == b) {
            problems.push_back("edges: self-loop on " + std::to_string(a));
            continue;
        }
        links.insert(Link(a, b));
    }
    for (const FaultSpec& fault : faults) {
        if (!links.contains(fault.link)) {
            problems.push_back("faults: unknown link [" +
                               std::to_string(fault.link.a) + "," +
                               std::to_string(fault.link.b) + "]");
        }
    }

    if (quorum_t) {
        if (*quorum_t < 2 || *quorum_t > integrators) {
            problems.push_back("protocol.quorum: threshold out of range");
        }
        if (quorum_n && *quorum_n != integrators) {
            problems.push_back(
                "protocol.quorum: n does not match integrator count");
        }
    }
    if (signature_length_bits == 0) {
        problems.push_back("protocol.signature_length_bits: must be positive");
    }
    if (fanout < 2) {
        problems.push_back("protocol.fanout: must be at least 2");
    }
    if (clock_ghz <= 0.0) {
        problems.push_back("protocol.clock_ghz: must be positive");
    }
    if (hash_cycles < 1) {
        problems.push_back("protocol.hash_cycles: must be at least 1");
    }
    if (puf_bit_error_rate < 0.0 || puf_bit_error_rate > 1.0) {
        problems.push_back("protocol.puf_bit_error_rate: must be in [0, 1]");
    }
    if (attack) {
        if (attack->trials < 1) {
            problems.push_back("attack.trials: must be at least 1");
        }
        for (const std::string& name : attack->attacks) {
            if (name != "fault_injection" && name != "removal" &&
                name != "dos" && name != "replay") {
                problems.push_back(
                    "attack.attacks: unknown attack '" + name +
                    "' (known: fault_injection, removal, dos, replay)");
            }
        }
        if (attack->sweep_lengths.empty()) {
            problems.push_back("attack.sweep_lengths: must be non-empty");
        }
    }

    if (problems.empty()) {
        // Structural checks that need the built graph.
        try {
            Topology topo = build_topology();
            if (!topo.connected_over_healthy()) {
                problems.push_back(
                    "topology: graph is not connected over healthy links");
            }
        } catch (const std::exception& e) {
            problems.push_back(std::string("topology: ") + e.what());
        }
    }
    return problems;
}

Topology ScenarioConfig::build_topology() const {
    Topology topo;
    for (const NodeSpec& node : nodes) {
        topo.add_node(node.id, node.role);
    }
    for (const auto& [a, b] : edges) {
        topo.add_link(a, b);
    }
    topo.set_base_link_latency(link_latency_cycles);
    for (const FaultSpec& fault : faults) {
        if (fault.from_cycle || fault.to_cycle) {
            topo.schedule_fault(
                fault.link, fault.state, fault.from_cycle.value_or(0),
                fault.to_cycle.value_or(UINT64_MAX));
        } else {
            topo.inject_link_fault(fault.link, fault.state);
        }
    }
    return topo;
}

std::vector<Chiplet> ScenarioConfig::build_devices(std::uint64_t seed) const {
    std::vector<Chiplet> devices;
    for (const NodeSpec& node : nodes) {
        Chiplet c;
        c.id = node.id;
        c.role = node.role;
        c.puf_secret = derive_puf_secret(seed, node.id);
        if (node.behavior == "clone") {
            c.puf_secret = derive_clone_secret(seed, node.id);
            c.honest = false;
        } else if (node.behavior == "silent") {
            c.behavior = Behavior::Silent;
            c.honest = false;
        } else if (node.behavior == "forge_match") {
            c.behavior = Behavior::ForgeMatch;
            c.honest = false;
        }
        devices.push_back(std::move(c));
    }
    return devices;
}

ProtocolConfig ScenarioConfig::protocol_config() const {
    ProtocolConfig config;
    config.quorum_t = quorum_t;
    config.signature_length_bits = signature_length_bits;
    config.fanout = fanout;
    config.clock_ghz = clock_ghz;
    config.hash_cycles = hash_cycles;
    config.puf_bit_error_rate = puf_bit_error_rate;
    return config;
}

AttackSetup ScenarioConfig::attack_setup(std::uint64_t run_seed) const {
    AttackSetup setup;
    setup.topology = build_topology();
    setup.config = protocol_config();
    setup.seed = run_seed;
    setup.trials = attack ? attack->trials : 1000;
    const std::vector<NodeId> third_parties =
        setup.topology.ids_with_role(Role::ThirdParty);
    if (third_parties.empty()) {
        throw std::runtime_error("scenario has no third-party chiplet to attack");
    }
    setup.target = (attack && attack->target) ? *attack->target
                                              : third_parties.front();
    setup.victim_integrator =
        (attack && attack->victim_integrator) ? *attack->victim_integrator : 0;
    return setup;
}

std::string transcript_jsonl(const AuthReport& report,
                             const std::string& scenario_json) {
    std::string out;
    {
        json header;
        header["kind"] = "header";
        header["schema"] = 1;
        header["seed"] = report.seed;
        header["session_id"] = report.session_id;
        header["scenario"] = json::parse(scenario_json);
        out += header.dump();
        out += '\n';
    }
    for (const TranscriptRecord& rec : report.transcripts) {
        json j;
        j["kind"] = "message";
        j["cycle"] = rec.msg.emit_cycle;
        j["src"] = rec.msg.src;
        j["dst"] = rec.msg.dst;
        j["msg"] = message_kind_name(rec.msg.kind);
        j["session"] = rec.msg.session_id;
        j["payload"] = to_hex(rec.msg.payload);
        j["route"] = rec.route;
        j["outcome"] = rec.outcome;
        j["arrival"] = rec.arrival_cycle;
        out += j.dump();
        out += '\n';
    }
    {
        json summary;
        summary["kind"] = "summary";
        json verdicts = json::object();
        for (const auto& [id, tr] : report.targets) {
            verdicts[std::to_string(id)] = verdict_name(tr.final_verdict);
        }
        summary["verdicts"] = std::move(verdicts);
        summary["critical_path_cycles"] = report.latency.critical_path_cycles;
        out += summary.dump();
        out += '\n';
    }
    return out;
}

ParsedTranscript parse_transcript(const std::string& jsonl_text) {
    ParsedTranscript parsed;
    std::istringstream in(jsonl_text);
    std::string line;
    bool have_header = false;
    bool have_summary = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "header") {
            if (j.at("schema").get<int>() != 1) {
                throw std::invalid_argument("transcript schema mismatch");
            }
            parsed.seed = j.at("seed").get<std::uint64_t>();
            parsed.session_id = j.at("session_id").get<std::uint64_t>();
            parsed.scenario =
                ScenarioConfig::from_json_text(j.at("scenario").dump());
            have_header = true;
        } else if (kind == "message") {
            TranscriptRecord rec;
            rec.msg.emit_cycle = j.at("cycle").get<std::uint64_t>();
            rec.msg.src = j.at("src").get<NodeId>();
            rec.msg.dst = j.at("dst").get<NodeId>();
            rec.msg.kind = message_kind_from_name(j.at("msg").get<std::string>());
            rec.msg.session_id = j.at("session").get<std::uint64_t>();
            rec.msg.payload = from_hex(j.at("payload").get<std::string>());
            rec.route = j.at("route").get<std::size_t>();
            rec.outcome = j.at("outcome").get<std::string>();
            rec.arrival_cycle = j.at("arrival").get<std::uint64_t>();
            parsed.messages.push_back(std::move(rec));
        } else if (kind == "summary") {
            for (const auto& [id, verdict] : j.at("verdicts").items()) {
                parsed.verdicts[std::stoull(id)] = verdict.get<std::string>();
            }
            parsed.critical_path_cycles =
                j.at("critical_path_cycles").get<std::uint64_t>();
            have_summary = true;
        } else {
            throw std::invalid_argument("unknown transcript record kind: " + kind);
        }
    }
    if (!have_header) {
        throw std::invalid_argument("transcript missing header record");
    }
    if (!have_summary) {
        throw std::runtime_error("transcript ends mid-session");
    }
    return parsed;
}

}  // namespace authentree
