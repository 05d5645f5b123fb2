#pragma once
// Deterministic synthetic provider and generator. Documents carry latent
// claim ids in a parseable marker; the provider turns claim identity into
// NLI-like scores with disjoint ranges for agreement vs conflict, so
// scenario outcomes are checkable without any model in the loop.

#include <cstdint>
#include <optional>
#include <string>

#include "evicut/pipeline.hpp"
#include "evicut/relations.hpp"

namespace evicut::sim {

enum class DocKind { honest, poison, pia, noise };

struct OracleConfig {
    double intra_entail_lo = 0.70;  // same-claim entailment range
    double intra_entail_hi = 0.95;
    double cross_contra_lo = 0.70;  // conflicting-claim contradiction range
    double cross_contra_hi = 0.95;
    double noise_floor = 0.10;      // cap for every off-relation score
    uint64_t seed = 0;
};

const char* doc_kind_name(DocKind kind);

// Synthetic document text: a bracketed marker head followed by filler prose.
// `salt` varies the filler so equal-claim documents are not byte-identical.
std::string make_doc(int claim_id, DocKind kind, int rank, uint64_t salt);

struct ParsedDoc {
    int claim_id = -1;
    DocKind kind = DocKind::noise;
    int rank = 0;
};
std::optional<ParsedDoc> parse_doc(const std::string& doc_text);

// Canonical answer sentence for a claim; what the oracle generator emits.
std::string claim_answer(int claim_id);

// Claim id embedded in an answer or document, if any.
std::optional<int> parse_claim(const std::string& text);

class OracleProvider : public ScoringProvider {
public:
    explicit OracleProvider(OracleConfig cfg = {});

    AtomicAnswer generate_atomic(const std::string& query,
                                 const std::string& doc_text) override;
    DirectedRelationScores score_pair(const std::string& a,
                                      const std::string& b) override;
    Eigen::VectorXd embed(const std::string& text) override;

    const OracleConfig& config() const { return cfg_; }

private:
    double draw(uint64_t h, double lo, double hi) const;

    OracleConfig cfg_;
};

// Majority claim across the reliable items; ties fall to the larger summed
// weight, then to the smaller claim id. Items with no parseable claim only
// matter when nothing parses, in which case the heaviest item's text wins.
class OracleGenerator : public Generator {
public:
    std::string synthesize(const std::string& query,
                           const std::vector<ReliableItem>& items) override;
};

}  // namespace evicut::sim
