#include <doctest.h>

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "evicut/pipeline.hpp"
#include "evicut/sim/oracle.hpp"
#include "evicut/sim/scenario.hpp"
#include "support/test_providers.hpp"

using namespace evicut;
using namespace evicut::sim;
using evicut::testing::ConstantProvider;
using evicut::testing::HookProvider;
using evicut::testing::JoinGenerator;

namespace {

EvidenceSnapshot honest_snapshot(int claim, int k, int step, uint64_t salt) {
    EvidenceSnapshot snap;
    snap.query = "Which entity does the evidence currently support?";
    snap.step = step;
    for (int r = 1; r <= k; ++r) {
        snap.docs.push_back(make_doc(claim, DocKind::honest, r, salt + static_cast<uint64_t>(r)));
    }
    return snap;
}

Eigen::VectorXd fixed_embed() {
    Eigen::VectorXd e(2);
    e << 0.6, 0.8;
    return e;
}

}  // namespace

TEST_CASE("defend_static: mutually entailing documents are all kept") {
    OracleProvider provider;
    OracleGenerator generator;
    const auto snap = honest_snapshot(42, 3, 0, 900);
    const auto o = defend_static(snap, provider, generator);

    CHECK_FALSE(o.abstained);
    CHECK(o.answer == claim_answer(42));
    CHECK(o.reliable_indices == std::vector<int>{0, 1, 2});
    CHECK_FALSE(o.memory_used);
    CHECK(o.belief.step == 1);
    CHECK(o.belief.pi_s >= 0.7);
    CHECK(o.belief.pi_f <= 0.1);
    CHECK(o.diagnostics.cut_value >= 0.0);
}

TEST_CASE("defend_static: single document") {
    OracleProvider provider;
    OracleGenerator generator;
    const auto o = defend_static(honest_snapshot(7, 1, 0, 31), provider, generator);
    CHECK_FALSE(o.abstained);
    CHECK(o.answer == claim_answer(7));
    CHECK(o.reliable_indices == std::vector<int>{0});
}

TEST_CASE("defend_static: conflicting front-rank document is excluded") {
    OracleProvider provider;
    OracleGenerator generator;
    auto snap = honest_snapshot(42, 10, 0, 4200);
    snap.docs[0] = make_doc(999, DocKind::poison, 1, 77);

    const auto o = defend_static(snap, provider, generator);
    CHECK_FALSE(o.abstained);
    CHECK(o.answer == claim_answer(42));
    CHECK(o.reliable_indices == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("defend_static: abstains without usable evidence") {
    OracleProvider provider;
    OracleGenerator generator;
    BeliefState prev;
    prev.pi_s = 0.4;
    prev.pi_f = 0.2;
    prev.step = 3;

    SUBCASE("empty snapshot") {
        EvidenceSnapshot snap;
        snap.step = 0;
        const auto o = defend_static(snap, provider, generator, kDefaultLambda, prev);
        CHECK(o.abstained);
        CHECK(o.answer == kAbstainMarker);
        CHECK(o.reliable_indices.empty());
        CHECK(o.belief.pi_s == 0.4);
        CHECK(o.belief.pi_f == 0.2);
        CHECK(o.belief.step == 4);
    }
    SUBCASE("all documents uninformative") {
        EvidenceSnapshot snap;
        snap.step = 0;
        for (int r = 1; r <= 4; ++r) snap.docs.push_back(make_doc(0, DocKind::noise, r, 5));
        const auto o = defend_static(snap, provider, generator, kDefaultLambda, prev);
        CHECK(o.abstained);
        CHECK(o.answer == kAbstainMarker);
        CHECK(o.belief.step == 4);
    }
}

TEST_CASE("defend_static: synthesizes from document texts weighted by centrality") {
    ConstantProvider provider(0.81, 0.04);
    provider.on_embed = [](const std::string&) { return fixed_embed(); };
    JoinGenerator generator;

    EvidenceSnapshot snap;
    snap.query = "q";
    snap.step = 0;
    snap.docs = {"d0", "d1", "d2"};
    const auto o = defend_static(snap, provider, generator);
    CHECK(o.answer == "d0 | d1 | d2");
    CHECK(o.reliable_indices == std::vector<int>{0, 1, 2});
    CHECK(o.belief.pi_s == doctest::Approx(0.81).epsilon(1e-12));
    CHECK(o.belief.pi_f == doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("defend_dynamic: argument validation") {
    OracleProvider provider;
    OracleGenerator generator;
    const auto snap = honest_snapshot(1, 2, 0, 9);
    CHECK_THROWS_AS(defend_dynamic(snap, "prev", BeliefState{}, provider, generator),
                    std::invalid_argument);
    auto at1 = honest_snapshot(1, 2, 1, 9);
    CHECK_THROWS_AS(defend_dynamic(at1, "", BeliefState{}, provider, generator),
                    std::invalid_argument);
}

TEST_CASE("defend_dynamic: degraded fallback carries the previous answer") {
    OracleProvider provider;
    OracleGenerator generator;
    BeliefState belief;
    belief.pi_s = 0.7;
    belief.pi_f = 0.1;
    belief.step = 1;

    SUBCASE("no documents") {
        EvidenceSnapshot snap;
        snap.step = 1;
        const auto o = defend_dynamic(snap, "held answer", belief, provider, generator);
        CHECK(o.diagnostics.degraded);
        CHECK_FALSE(o.abstained);
        CHECK(o.answer == "held answer");
        CHECK_FALSE(o.memory_used);
        CHECK(o.belief.pi_s == 0.7);
        CHECK(o.belief.step == 1);
    }
    SUBCASE("only uninformative documents") {
        EvidenceSnapshot snap;
        snap.step = 1;
        for (int r = 1; r <= 3; ++r) snap.docs.push_back(make_doc(0, DocKind::noise, r, 8));
        const auto o = defend_dynamic(snap, "held answer", belief, provider, generator);
        CHECK(o.diagnostics.degraded);
        CHECK(o.answer == "held answer");
    }
}

TEST_CASE("defend_dynamic: agreeing memory lands source-side and rides last") {
    ConstantProvider provider(0.81, 0.04);
    provider.on_embed = [](const std::string&) { return fixed_embed(); };
    provider.on_atomic = [](const std::string&, const std::string& doc) {
        return AtomicAnswer{0, "e" + doc, true};
    };
    JoinGenerator generator;

    BeliefState belief;
    belief.pi_s = 0.81;
    belief.pi_f = 0.04;
    belief.step = 1;

    EvidenceSnapshot snap;
    snap.query = "q";
    snap.step = 1;
    snap.docs = {"x", "y"};
    const auto o = defend_dynamic(snap, "PREV", belief, provider, generator);
    CHECK(o.memory_used);
    CHECK(o.memory_kept);
    CHECK_FALSE(o.abstained);
    // Documents synthesize through their atomic answers; the remembered
    // answer is appended after them.
    CHECK(o.answer == "ex | ey | PREV");
    CHECK(o.reliable_indices == std::vector<int>{0, 1});
}

TEST_CASE("defend_dynamic: stable truth keeps answer and memory across steps") {
    OracleProvider provider;
    OracleGenerator generator;
    const auto first = defend_static(honest_snapshot(42, 3, 0, 100), provider, generator);
    REQUIRE_FALSE(first.abstained);

    const auto second = defend_dynamic(honest_snapshot(42, 3, 1, 200), first.answer,
                                       first.belief, provider, generator);
    CHECK(second.memory_used);
    CHECK(second.memory_kept);
    CHECK(second.answer == first.answer);
    CHECK(second.belief.pi_s >= 0.7);
    CHECK(second.belief.step == 2);
}

TEST_CASE("defend_dynamic: contradicted memory is dropped and the answer flips") {
    OracleProvider provider;
    OracleGenerator generator;
    const auto first = defend_static(honest_snapshot(42, 3, 0, 300), provider, generator);
    REQUIRE(first.answer == claim_answer(42));

    const auto second = defend_dynamic(honest_snapshot(43, 3, 1, 400), first.answer,
                                       first.belief, provider, generator);
    CHECK(second.memory_used);
    CHECK(second.answer == claim_answer(43));
    CHECK(second.belief.pi_s >= 0.7);  // belief now tracks the new answer
}

TEST_CASE("run_stream: validation and basic shapes") {
    OracleProvider provider;
    OracleGenerator generator;
    CHECK(run_stream({}, provider, generator).empty());

    std::vector<EvidenceSnapshot> bad_start{honest_snapshot(1, 2, 1, 0)};
    CHECK_THROWS_AS(run_stream(bad_start, provider, generator), std::invalid_argument);

    std::vector<EvidenceSnapshot> repeat{honest_snapshot(1, 2, 0, 0),
                                         honest_snapshot(1, 2, 0, 1)};
    CHECK_THROWS_AS(run_stream(repeat, provider, generator), std::invalid_argument);
}

TEST_CASE("run_stream: single step equals defend_static") {
    const auto snap = honest_snapshot(42, 4, 0, 123);
    OracleProvider p1, p2;
    OracleGenerator generator;
    const auto streamed = run_stream({snap}, p1, generator);
    const auto direct = defend_static(snap, p2, generator);
    REQUIRE(streamed.size() == 1);
    CHECK(outcome_record(streamed[0]) == outcome_record(direct));
}

TEST_CASE("run_stream: abstention falls back to the static path") {
    OracleProvider provider;
    OracleGenerator generator;

    EvidenceSnapshot noise;
    noise.query = "q";
    noise.step = 0;
    for (int r = 1; r <= 3; ++r) noise.docs.push_back(make_doc(0, DocKind::noise, r, 60));

    auto second = honest_snapshot(42, 3, 1, 61);
    auto third = honest_snapshot(42, 3, 2, 62);
    const auto outcomes = run_stream({noise, second, third}, provider, generator);
    REQUIRE(outcomes.size() == 3);
    CHECK(outcomes[0].abstained);
    // No remembered answer: the next step runs without a memory node.
    CHECK_FALSE(outcomes[1].memory_used);
    CHECK_FALSE(outcomes[1].abstained);
    CHECK(outcomes[1].answer == claim_answer(42));
    // With an answer in hand the third step goes dynamic again.
    CHECK(outcomes[2].memory_used);
}

TEST_CASE("run_stream: truth flip adopted within two steps") {
    OracleConfig cfg;
    cfg.cross_contra_lo = 0.8;
    OracleProvider provider(cfg);
    OracleGenerator generator;

    std::vector<EvidenceSnapshot> stream;
    stream.push_back(honest_snapshot(50, 4, 0, 700));
    stream.push_back(honest_snapshot(50, 4, 1, 701));
    stream.push_back(honest_snapshot(51, 4, 2, 702));
    stream.push_back(honest_snapshot(51, 4, 3, 703));
    const auto outcomes = run_stream(stream, provider, generator);
    REQUIRE(outcomes.size() == 4);
    CHECK(outcomes[1].answer == claim_answer(50));
    CHECK(outcomes[3].answer == claim_answer(51));
}

TEST_CASE("run_stream: deterministic under a fixed provider seed") {
    ScenarioConfig cfg;
    cfg.steps = 4;
    cfg.top_k = 6;
    cfg.truth_claim = 11;
    cfg.flip_step = 2;
    cfg.attack.kind = AttackKind::poison;
    cfg.attack.positions = {1};
    cfg.seed = 5;
    const auto scen = build_stream(cfg);

    auto run_once = [&] {
        OracleProvider provider;
        OracleGenerator generator;
        std::string all;
        for (const auto& o : run_stream(scen.stream, provider, generator)) {
            all += outcome_record(o);
            all += '\n';
        }
        return all;
    };
    CHECK(run_once() == run_once());
}

TEST_CASE("run_stream: abstention soundness invariants") {
    for (uint64_t seed = 0; seed < 6; ++seed) {
        ScenarioConfig cfg;
        cfg.steps = 5;
        cfg.top_k = 6;
        cfg.truth_claim = static_cast<int>(100 + seed);
        cfg.flip_step = (seed % 2 == 0) ? 3 : -1;
        cfg.attack.kind = (seed % 3 == 0) ? AttackKind::pia : AttackKind::poison;
        cfg.attack.positions = {1, 2};
        cfg.seed = seed;
        const auto scen = build_stream(cfg);

        OracleProvider provider;
        OracleGenerator generator;
        const auto outcomes = run_stream(scen.stream, provider, generator);
        REQUIRE(outcomes.size() == scen.stream.size());
        for (size_t t = 0; t < outcomes.size(); ++t) {
            const auto& o = outcomes[t];
            CHECK(o.step == static_cast<int>(t));
            if (o.abstained) {
                CHECK(o.answer == kAbstainMarker);
                CHECK(o.reliable_indices.empty());
            } else {
                CHECK(o.answer != kAbstainMarker);
                const bool grounded = !o.reliable_indices.empty() || o.memory_kept ||
                                      o.diagnostics.degraded;
                CHECK(grounded);
            }
            CHECK(o.belief.pi_s >= 0.0);
            CHECK(o.belief.pi_s <= 1.0);
            CHECK(o.belief.pi_f >= 0.0);
            CHECK(o.belief.pi_f <= 1.0);
            CHECK(o.belief.step == static_cast<int>(t) + 1);
        }
    }
}

TEST_CASE("synthesis_prompt: carries the query and numbered statements") {
    const auto p = synthesis_prompt("who?", {{"first fact", 0.9}, {"second fact", 0.5}});
    CHECK(p.find("who?") != std::string::npos);
    CHECK(p.find("1. first fact") != std::string::npos);
    CHECK(p.find("2. second fact") != std::string::npos);
}

TEST_CASE("state serialization: round-trip and size budget") {
    InterStepState state;
    state.answer = "line one\nline \"two\" with \\ and unicode \xC3\xA9";
    state.belief.pi_s = 0.123456789;
    state.belief.pi_f = 0.25;
    state.belief.step = 17;

    const auto text = serialize_state(state);
    CHECK(text.find('\n') == std::string::npos);
    const auto back = deserialize_state(text);
    CHECK(back.answer == state.answer);
    CHECK(back.belief.pi_s == state.belief.pi_s);
    CHECK(back.belief.pi_f == state.belief.pi_f);
    CHECK(back.belief.step == 17);

    // A two-kilobyte quote-heavy answer still fits four kilobytes serialized.
    InterStepState big;
    big.belief.pi_s = 0.99;
    big.belief.pi_f = 0.01;
    big.belief.step = 9999;
    while (big.answer.size() < 2048) big.answer += "\"quoted\"\n\\slash\t";
    big.answer.resize(2048);
    const auto wire = serialize_state(big);
    CHECK(wire.size() <= 4096);
    CHECK(deserialize_state(wire).answer == big.answer);
}

TEST_CASE("state deserialization: rejects malformed payloads") {
    CHECK_THROWS(deserialize_state("not json"));
    CHECK_THROWS_AS(deserialize_state(R"({"pi_s":0.5,"pi_f":0.5,"step":1})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(deserialize_state(R"({"answer_b64":"","pi_s":1.5,"pi_f":0.5,"step":1})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(deserialize_state(R"({"answer_b64":"","pi_s":0.5,"pi_f":0.5,"step":-2})"),
                    std::invalid_argument);
}

TEST_CASE("outcome_record: single line with the full outcome") {
    OracleProvider provider;
    OracleGenerator generator;
    const auto o = defend_static(honest_snapshot(3, 2, 0, 44), provider, generator);
    const auto line = outcome_record(o);
    CHECK(line.find('\n') == std::string::npos);

    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("step").get<int>() == 0);
    CHECK(j.at("answer").get<std::string>() == o.answer);
    CHECK(j.at("abstained").get<bool>() == o.abstained);
    CHECK(j.at("reliable").get<std::vector<int>>() == o.reliable_indices);
    CHECK(j.at("memory_used").get<bool>() == false);
    CHECK(j.at("belief").at("step").get<int>() == 1);
    CHECK(j.contains("cut_value"));
    CHECK(j.contains("degraded"));
}
