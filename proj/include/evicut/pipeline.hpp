#pragma once
// End-to-end defense: atomic answers -> relation matrices -> centrality ->
// energy graph (optionally memory-augmented) -> min cut -> isolation filter
// -> synthesis -> belief update. One EvidenceSnapshot in, one DefenseOutcome
// out; run_stream threads belief and answer across a whole snapshot sequence.

#include <string>
#include <vector>

#include "evicut/centrality.hpp"
#include "evicut/memory.hpp"
#include "evicut/mincut.hpp"
#include "evicut/postfilter.hpp"
#include "evicut/relations.hpp"

namespace evicut {

// Returned verbatim when no reliable evidence survives; never a real answer.
inline constexpr const char* kAbstainMarker = "[[ABSTAIN: no reliable evidence]]";

struct EvidenceSnapshot {
    std::string query;
    std::vector<std::string> docs;  // retrieval order, rank 1 first
    int step = 0;
};

struct ReliableItem {
    std::string text;
    double weight = 0.0;  // centrality for documents, posterior for the memory answer
};

class Generator {
public:
    virtual ~Generator() = default;
    // Contract: compose strictly from `items`; no outside knowledge, no
    // corrections, no challenges to what the items say.
    virtual std::string synthesize(const std::string& query,
                                   const std::vector<ReliableItem>& items) = 0;
};

// Instruction block for LLM-backed generators honoring the same contract.
std::string synthesis_prompt(const std::string& query,
                             const std::vector<ReliableItem>& items);

struct Diagnostics {
    double cut_value = 0.0;
    EnergyValue energy;       // energy of the chosen labeling
    FilterReport filter;
    int fallback_doc = -1;    // argmax S_i - F_i, surfaced on abstention
    bool degraded = false;    // empty-evidence fallback path taken
};

struct DefenseOutcome {
    int step = 0;
    std::string answer;                 // kAbstainMarker when abstained
    bool abstained = false;
    std::vector<int> reliable_indices;  // positions into snapshot.docs
    bool memory_used = false;           // dynamic path ran with a memory node
    bool memory_kept = false;           // cut placed the memory node source-side
    BeliefState belief;                 // priors for the next step
    Diagnostics diagnostics;
};

DefenseOutcome defend_static(const EvidenceSnapshot& snapshot,
                             ScoringProvider& provider,
                             Generator& generator,
                             double lambda = kDefaultLambda,
                             const BeliefState& prev_belief = BeliefState{});

// Requires snapshot.step > 0 and a non-empty previous answer. Empty or fully
// uninformative evidence returns prev_answer unchanged with the degraded
// flag set.
DefenseOutcome defend_dynamic(const EvidenceSnapshot& snapshot,
                              const std::string& prev_answer,
                              const BeliefState& belief,
                              ScoringProvider& provider,
                              Generator& generator,
                              double lambda = kDefaultLambda);

// First snapshot must have step 0 and steps must increase. After an
// abstained step the next one runs the static path again (there is no answer
// to remember), with the belief carried through.
std::vector<DefenseOutcome> run_stream(const std::vector<EvidenceSnapshot>& stream,
                                       ScoringProvider& provider,
                                       Generator& generator,
                                       double lambda = kDefaultLambda);

// Everything a query needs between process runs: last answer plus belief.
struct InterStepState {
    std::string answer;
    BeliefState belief;
};

// Compact single-line JSON; the answer travels base64-coded so the record
// stays line-safe regardless of answer content.
std::string serialize_state(const InterStepState& state);
InterStepState deserialize_state(const std::string& text);

// Single-line JSON record for logs: step, answer, reliable indices, memory
// flags, cut value, belief, abstention.
std::string outcome_record(const DefenseOutcome& outcome);

}  // namespace evicut
