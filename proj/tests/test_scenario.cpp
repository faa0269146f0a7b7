// Copyright 2026 The AuthenTree Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include <doctest.h>

#include <filesystem>

#include "authentree/scenario.hpp"
#include "test_util.hpp"

using namespace authentree;

namespace {

std::string minimal_scenario(const std::string& quorum = "\"auto\"") {
    return R"({
      "schema": 1,
      "seed": 1,
      "topology": {
        "nodes": [
          {"id": 1, "role": "integrator"},
          {"id": 2, "role": "integrator"},
          {"id": 3, "role": "integrator"},
          {"id": 11, "role": "third_party"}
        ],
        "edges": [[1,2],[1,3],[2,3],[1,11],[2,11],[3,11]]
      },
      "protocol": {"quorum": )" +
           quorum + R"(, "signature_length_bits": 256}
    })";
}

}  // namespace

TEST_CASE("every shipped scenario validates cleanly and runs") {
    const std::filesystem::path dir =
        std::filesystem::path(test::source_dir()) / "scenarios";
    std::size_t checked = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        const ScenarioConfig config =
            ScenarioConfig::from_file(entry.path().string());
        const auto problems = config.validate();
        for (const std::string& p : problems) {
            FAIL_CHECK(entry.path().filename().string() << ": " << p);
        }
        ++checked;
    }
    CHECK(checked >= 5);
}

TEST_CASE("benchmark scenarios produce the expected verdict mix") {
    SUBCASE("cva6: all authentic") {
        const ScenarioConfig config = ScenarioConfig::from_file(
            test::source_dir() + "/scenarios/cva6.json");
        const AuthReport report =
            authenticate_sip(config.build_topology(),
                             config.build_devices(config.seed),
                             config.protocol_config(), config.seed);
        CHECK(report.all_pass());
        CHECK(report.latency.critical_path_cycles < 1000);
    }
    SUBCASE("counterfeit: exactly one chiplet fault") {
        const ScenarioConfig config = ScenarioConfig::from_file(
            test::source_dir() + "/scenarios/counterfeit.json");
        const AuthReport report =
            authenticate_sip(config.build_topology(),
                             config.build_devices(config.seed),
                             config.protocol_config(), config.seed);
        std::size_t faults = 0;
        for (const auto& [id, tr] : report.targets) {
            if (tr.final_verdict == Verdict::Fail) {
                ++faults;
                CHECK(id == 13);
            }
        }
        CHECK(faults == 1);
    }
    SUBCASE("link_fault: diagnosis without rejection") {
        const ScenarioConfig config = ScenarioConfig::from_file(
            test::source_dir() + "/scenarios/link_fault.json");
        const AuthReport report =
            authenticate_sip(config.build_topology(),
                             config.build_devices(config.seed),
                             config.protocol_config(), config.seed);
        CHECK(report.all_pass());
        const TargetReport& tr = report.targets.at(11);
        REQUIRE(tr.diagnosis.has_value());
        CHECK(tr.diagnosis->classification == FaultClass::LinkFault);
    }
}

TEST_CASE("validation diagnostics name the offending field") {
    SUBCASE("duplicate chiplet id") {
        std::string text = minimal_scenario();
        text.replace(text.find("\"id\": 2"), 7, "\"id\": 1");
        const ScenarioConfig config = ScenarioConfig::from_json_text(text);
        const auto problems = config.validate();
        REQUIRE(!problems.empty());
        bool found = false;
        for (const auto& p : problems) {
            if (p.find("duplicate chiplet id 1") != std::string::npos) {
                found = true;
            }
        }
        CHECK(found);
    }

    SUBCASE("threshold out of range") {
        const ScenarioConfig config =
            ScenarioConfig::from_json_text(minimal_scenario("{\"t\": 7}"));
        const auto problems = config.validate();
        REQUIRE(!problems.empty());
        CHECK(problems.front().find("threshold out of range") !=
              std::string::npos);
    }

    SUBCASE("missing seed") {
        std::string text = minimal_scenario();
        text.replace(text.find("\"seed\": 1,"), 10, "");
        const auto problems =
            ScenarioConfig::from_json_text(text).validate();
        REQUIRE(!problems.empty());
        CHECK(problems.front().find("seed") != std::string::npos);
    }

    SUBCASE("disconnected graph") {
        std::string text = minimal_scenario();
        text.replace(text.find("[[1,2],[1,3],[2,3],[1,11],[2,11],[3,11]]"),
                     std::string("[[1,2],[1,3],[2,3],[1,11],[2,11],[3,11]]")
                         .size(),
                     "[[1,2],[1,3],[2,3]]");
        const auto problems =
            ScenarioConfig::from_json_text(text).validate();
        REQUIRE(!problems.empty());
        CHECK(problems.front().find("not connected") != std::string::npos);
    }

    SUBCASE("protocol knob bounds") {
        std::string text = minimal_scenario();
        text.replace(text.find("\"signature_length_bits\": 256"),
                     std::string("\"signature_length_bits\": 256").size(),
                     "\"signature_length_bits\": 256, \"hash_cycles\": 0, "
                     "\"puf_bit_error_rate\": 2.0");
        const auto problems = ScenarioConfig::from_json_text(text).validate();
        REQUIRE(problems.size() == 2);
        CHECK(problems[0].find("hash_cycles") != std::string::npos);
        CHECK(problems[1].find("puf_bit_error_rate") != std::string::npos);
    }

    SUBCASE("unknown behavior and unknown fault link") {
        std::string text = minimal_scenario();
        text.replace(text.find("{\"id\": 11, \"role\": \"third_party\"}"),
                     std::string("{\"id\": 11, \"role\": \"third_party\"}")
                         .size(),
                     "{\"id\": 11, \"role\": \"third_party\", "
                     "\"behavior\": \"evil\"}");
        const auto problems =
            ScenarioConfig::from_json_text(text).validate();
        REQUIRE(!problems.empty());
        CHECK(problems.front().find("unknown behavior") != std::string::npos);
    }
}

TEST_CASE("scenario behaviors reach the device models") {
    std::string text = minimal_scenario();
    text.replace(text.find("{\"id\": 11, \"role\": \"third_party\"}"),
                 std::string("{\"id\": 11, \"role\": \"third_party\"}").size(),
                 "{\"id\": 11, \"role\": \"third_party\", "
                 "\"behavior\": \"silent\"}");
    const ScenarioConfig config = ScenarioConfig::from_json_text(text);
    const auto devices = config.build_devices(1);
    const auto it = std::find_if(devices.begin(), devices.end(),
                                 [](const Chiplet& c) { return c.id == 11; });
    REQUIRE(it != devices.end());
    CHECK(it->behavior == Behavior::Silent);
    CHECK_FALSE(it->honest);
}

TEST_CASE("transcript JSONL round trip and truncation detection") {
    const ScenarioConfig config =
        ScenarioConfig::from_json_text(minimal_scenario());
    const AuthReport report =
        authenticate_sip(config.build_topology(),
                         config.build_devices(config.seed),
                         config.protocol_config(), config.seed);
    const std::string jsonl = transcript_jsonl(report, config.raw_json);

    const ParsedTranscript parsed = parse_transcript(jsonl);
    CHECK(parsed.seed == report.seed);
    CHECK(parsed.session_id == report.session_id);
    REQUIRE(parsed.messages.size() == report.transcripts.size());
    for (std::size_t i = 0; i < parsed.messages.size(); ++i) {
        CHECK(parsed.messages[i].msg.payload ==
              report.transcripts[i].msg.payload);
        CHECK(parsed.messages[i].outcome == report.transcripts[i].outcome);
    }
    CHECK(parsed.verdicts.at(11) == "pass");
    CHECK(parsed.critical_path_cycles == report.latency.critical_path_cycles);

    // Truncation: drop the summary line.
    const std::string truncated =
        jsonl.substr(0, jsonl.rfind("{\"critical_path_cycles\""));
    CHECK_THROWS_WITH_AS(parse_transcript(truncated),
                         "transcript ends mid-session", std::runtime_error);
}

TEST_CASE("attack section round trip") {
    const ScenarioConfig config = ScenarioConfig::from_file(
        test::source_dir() + "/scenarios/cva6.json");
    REQUIRE(config.attack.has_value());
    CHECK(config.attack->sweep_lengths ==
          std::vector<std::size_t>{64, 128, 256, 512});
    CHECK(config.attack->trials == 1000);
    const AttackSetup setup = config.attack_setup(config.seed);
    CHECK(setup.target == 11);
    CHECK(setup.victim_integrator == 2);
}
