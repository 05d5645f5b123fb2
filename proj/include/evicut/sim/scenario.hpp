#pragma once
// Synthetic evidence streams: honest documents for a ground-truth claim that
// may flip mid-stream, with optional attack injection, plus the per-step
// accepted answers and adversarial targets the metrics need.

#include <cstdint>
#include <string>
#include <vector>

#include "evicut/pipeline.hpp"
#include "evicut/sim/attack.hpp"

namespace evicut::sim {

struct ScenarioConfig {
    int steps = 1;
    int top_k = 10;
    int truth_claim = 100;
    int flip_step = -1;  // truth becomes a new claim from this step on; -1 = stable
    AttackConfig attack;
    uint64_t seed = 0;
};

struct Scenario {
    std::vector<EvidenceSnapshot> stream;
    std::vector<std::vector<std::string>> truth;  // accepted answers per step
    std::vector<std::string> targets;             // adversarial answer per step, "" when unattacked
    std::vector<int> truth_claims;                // latent claim per step
};

// The flipped claim is truth_claim + 1; an unset attack target defaults to a
// claim far from both. Fully deterministic under a fixed config.
Scenario build_stream(const ScenarioConfig& cfg);

}  // namespace evicut::sim
