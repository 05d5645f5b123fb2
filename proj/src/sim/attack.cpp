#include "evicut/sim/attack.hpp"

#include <set>
#include <stdexcept>

#include "evicut/sim/oracle.hpp"

namespace evicut::sim {

const char* attack_kind_name(AttackKind kind) {
    switch (kind) {
        case AttackKind::none: return "none";
        case AttackKind::pia: return "pia";
        case AttackKind::poison: return "poison";
    }
    return "none";
}

AttackKind attack_kind_from_name(const std::string& name) {
    if (name == "none") return AttackKind::none;
    if (name == "pia") return AttackKind::pia;
    if (name == "poison") return AttackKind::poison;
    throw std::invalid_argument("unknown attack kind: " + name);
}

const std::vector<int>& positions_for_step(const AttackConfig& attack, int step) {
    if (step >= 0 && static_cast<size_t>(step) < attack.schedule.size()) {
        return attack.schedule[step];
    }
    return attack.positions;
}

EvidenceSnapshot inject_attack(const EvidenceSnapshot& snapshot,
                               const AttackConfig& attack,
                               std::mt19937_64& rng) {
    EvidenceSnapshot out = snapshot;
    if (attack.kind == AttackKind::none) return out;

    const auto& positions = positions_for_step(attack, snapshot.step);
    if (positions.empty()) return out;
    if (attack.target_claim < 0) {
        throw std::invalid_argument("inject_attack: target claim required");
    }

    std::set<int> seen;
    const DocKind kind = attack.kind == AttackKind::pia ? DocKind::pia : DocKind::poison;
    for (int pos : positions) {
        if (pos < 1 || pos > static_cast<int>(out.docs.size())) {
            throw std::invalid_argument("inject_attack: position " + std::to_string(pos) +
                                        " outside [1, " + std::to_string(out.docs.size()) + "]");
        }
        if (!seen.insert(pos).second) {
            throw std::invalid_argument("inject_attack: duplicate position " + std::to_string(pos));
        }
        out.docs[pos - 1] = make_doc(attack.target_claim, kind, pos, rng());
    }
    return out;
}

}  // namespace evicut::sim
