#pragma once
// Corruption of retrieval snapshots: replace chosen ranks with adversarial
// documents, either a fixed position set or a per-step schedule.

#include <random>
#include <string>
#include <vector>

#include "evicut/pipeline.hpp"

namespace evicut::sim {

enum class AttackKind { none, pia, poison };

const char* attack_kind_name(AttackKind kind);
AttackKind attack_kind_from_name(const std::string& name);

struct AttackConfig {
    AttackKind kind = AttackKind::none;
    std::vector<int> positions;              // 1-based ranks to corrupt
    std::vector<std::vector<int>> schedule;  // per-step override of positions
    int target_claim = -1;                   // claim the attacker wants emitted
};

// schedule[step] when present, otherwise the static position list.
const std::vector<int>& positions_for_step(const AttackConfig& attack, int step);

// Copy of the snapshot with adversarial documents at the configured ranks.
// kind == none returns the snapshot untouched. The rng salts document
// content only; positions are taken as given. Throws std::invalid_argument
// on out-of-range or duplicate positions, or a missing target claim.
EvidenceSnapshot inject_attack(const EvidenceSnapshot& snapshot,
                               const AttackConfig& attack,
                               std::mt19937_64& rng);

}  // namespace evicut::sim
