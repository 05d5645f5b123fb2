#pragma once
// Accuracy / attack-success scoring of defense outcomes against per-step
// ground truth and adversarial targets.

#include <string>
#include <vector>

#include "evicut/pipeline.hpp"

namespace evicut::sim {

// claim: compare latent claim ids parsed from both texts (falls back to
// normalized equality when either side has none). text: case-folded,
// whitespace-collapsed substring acceptance.
enum class MatchMode { claim, text };

std::string normalize_text(const std::string& s);
bool answer_matches(const std::string& answer, const std::string& accepted,
                    MatchMode mode);

struct EvalResult {
    int steps = 0;
    int correct = 0;
    int hijacked = 0;
    int abstentions = 0;
    double accuracy = 0.0;  // correct / steps
    double asr = 0.0;       // hijacked / steps
};

// truth[t] lists accepted answers for step t; targets[t] is the adversarial
// answer ("" when the step is unattacked). Abstentions count against
// accuracy and never toward ASR. Throws on length mismatches.
EvalResult evaluate(const std::vector<DefenseOutcome>& outcomes,
                    const std::vector<std::vector<std::string>>& truth,
                    const std::vector<std::string>& targets,
                    MatchMode mode);

}  // namespace evicut::sim
