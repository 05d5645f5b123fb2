#include "evicut/memory.hpp"

#include <stdexcept>

#include "evicut/util.hpp"

namespace evicut {

double bayes_posterior(double prior, double likelihood) {
    require_unit(prior, "prior");
    require_unit(likelihood, "likelihood");
    const double p = clamp_prior(prior);
    const double num = p * likelihood;
    const double den = num + (1.0 - p) * (1.0 - likelihood);
    return num / den;
}

std::pair<double, double> likelihoods(const std::string& old_answer,
                                      const std::vector<std::string>& evidence,
                                      ScoringProvider& provider) {
    const auto aug = build_memory_augmentation(old_answer, BeliefState{}, evidence, provider);
    return {aug.l_s, aug.l_f};
}

MemoryAugmentation build_memory_augmentation(const std::string& prev_answer,
                                             const BeliefState& belief,
                                             const std::vector<std::string>& evidence,
                                             ScoringProvider& provider) {
    if (evidence.empty()) {
        throw std::invalid_argument("build_memory_augmentation: no current evidence");
    }

    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(evidence.size());
    for (const auto& e : evidence) pairs.emplace_back(prev_answer, e);
    const auto scores = provider.score_pairs(pairs);

    MemoryAugmentation aug;
    aug.answer_text = prev_answer;
    aug.links.reserve(evidence.size());
    double sum_m = 0.0;
    double sum_c = 0.0;
    for (size_t i = 0; i < evidence.size(); ++i) {
        const auto rel = symmetrize(scores[i]);
        aug.links.push_back(rel.m);
        sum_m += rel.m;
        sum_c += rel.c;
    }
    aug.l_s = sum_m / static_cast<double>(evidence.size());
    aug.l_f = sum_c / static_cast<double>(evidence.size());
    aug.s_old = bayes_posterior(belief.pi_s, aug.l_s);
    aug.f_old = bayes_posterior(belief.pi_f, aug.l_f);
    return aug;
}

FlowNetwork augment_graph(const FlowNetwork& net, const MemoryAugmentation& aug) {
    if (net.has_memory()) {
        throw std::invalid_argument("augment_graph: network already has a memory node");
    }
    if (static_cast<int>(aug.links.size()) != net.doc_count) {
        throw std::invalid_argument("augment_graph: one link per document required");
    }
    require_unit(aug.s_old, "s_old");
    require_unit(aug.f_old, "f_old");

    FlowNetwork out = net;
    out.memory_id = out.node_count;
    out.node_count += 1;
    out.edges.push_back({out.source_id, out.memory_id, aug.s_old});
    out.edges.push_back({out.memory_id, out.sink_id, aug.f_old});
    for (int i = 0; i < out.doc_count; ++i) {
        require_unit(aug.links[i], "link");
        if (quantize(aug.links[i], out.quantum) == 0) continue;
        out.edges.push_back({out.memory_id, i, aug.links[i]});
        out.edges.push_back({i, out.memory_id, aug.links[i]});
    }
    return out;
}

BeliefState update_priors(const std::string& final_answer,
                          const std::vector<std::string>& evidence,
                          ScoringProvider& provider,
                          const BeliefState& prev) {
    BeliefState next = prev;
    next.step = prev.step + 1;
    if (evidence.empty()) return next;

    const auto [l_s, l_f] = likelihoods(final_answer, evidence, provider);
    next.pi_s = clamp_prior(l_s);
    next.pi_f = clamp_prior(l_f);
    return next;
}

}  // namespace evicut
