#include "evicut/sim/scenario.hpp"

#include <stdexcept>

#include "evicut/sim/oracle.hpp"
#include "evicut/util.hpp"

namespace evicut::sim {

Scenario build_stream(const ScenarioConfig& cfg) {
    if (cfg.steps < 1) throw std::invalid_argument("build_stream: steps must be >= 1");
    if (cfg.top_k < 1) throw std::invalid_argument("build_stream: top_k must be >= 1");

    AttackConfig attack = cfg.attack;
    if (attack.kind != AttackKind::none && attack.target_claim < 0) {
        attack.target_claim = cfg.truth_claim + 7777;
    }

    std::mt19937_64 rng(hash_combine(cfg.seed, 0x5ce9a11aULL));
    Scenario sc;
    sc.stream.reserve(cfg.steps);

    for (int t = 0; t < cfg.steps; ++t) {
        const int claim = (cfg.flip_step >= 0 && t >= cfg.flip_step)
                              ? cfg.truth_claim + 1
                              : cfg.truth_claim;

        EvidenceSnapshot snap;
        snap.step = t;
        snap.query = "Which entity does the evidence currently support?";
        snap.docs.reserve(cfg.top_k);
        for (int r = 1; r <= cfg.top_k; ++r) {
            snap.docs.push_back(make_doc(claim, DocKind::honest, r, rng()));
        }
        snap = inject_attack(snap, attack, rng);

        sc.stream.push_back(std::move(snap));
        sc.truth_claims.push_back(claim);
        sc.truth.push_back({claim_answer(claim)});
        const bool attacked =
            attack.kind != AttackKind::none && !positions_for_step(attack, t).empty();
        sc.targets.push_back(attacked ? claim_answer(attack.target_claim) : std::string{});
    }
    return sc;
}

}  // namespace evicut::sim
