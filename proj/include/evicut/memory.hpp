#pragma once
// Belief state carried across time steps and the memory-node graph
// augmentation. The previous answer enters the current graph as one extra
// node whose terminal capacities are Bayesian posteriors: prior from the
// last step's belief, likelihood from agreement between the old answer and
// the current evidence.

#include <string>
#include <vector>

#include "evicut/energy.hpp"
#include "evicut/relations.hpp"

namespace evicut {

inline constexpr double kPriorClampLo = 0.01;
inline constexpr double kPriorClampHi = 0.99;

struct BeliefState {
    double pi_s = 0.0;  // prior that the last answer is still correct
    double pi_f = 0.0;  // prior that it is wrong
    int step = 0;
};

struct MemoryAugmentation {
    std::string answer_text;    // previous step's answer
    double l_s = 0.0;           // mean entailment against current evidence
    double l_f = 0.0;           // mean contradiction against current evidence
    double s_old = 0.0;         // posterior source capacity
    double f_old = 0.0;         // posterior sink capacity
    std::vector<double> links;  // pairwise capacity to each current document
};

inline double clamp_prior(double p) {
    return std::min(kPriorClampHi, std::max(kPriorClampLo, p));
}

// posterior = p*l / (p*l + (1-p)*(1-l)); the prior is clamped first, which
// keeps the denominator away from zero for any likelihood in [0,1].
double bayes_posterior(double prior, double likelihood);

// Mean symmetrized entailment / contradiction between old_answer and each of
// the current evidence texts. Throws std::invalid_argument on empty evidence.
std::pair<double, double> likelihoods(const std::string& old_answer,
                                      const std::vector<std::string>& evidence,
                                      ScoringProvider& provider);

// Scores the old answer against the evidence once and packages likelihoods,
// posteriors, and per-document link capacities together.
MemoryAugmentation build_memory_augmentation(const std::string& prev_answer,
                                             const BeliefState& belief,
                                             const std::vector<std::string>& evidence,
                                             ScoringProvider& provider);

// Copy of the static network plus one memory node wired with s_old / f_old
// terminals and anti-parallel link edges to every document node.
FlowNetwork augment_graph(const FlowNetwork& net, const MemoryAugmentation& aug);

// Fresh priors from the just-synthesized answer: pi_s / pi_f are the mean
// entailment / contradiction against the step's evidence, clamped. Empty
// evidence carries prev forward (step still advances).
BeliefState update_priors(const std::string& final_answer,
                          const std::vector<std::string>& evidence,
                          ScoringProvider& provider,
                          const BeliefState& prev);

}  // namespace evicut
