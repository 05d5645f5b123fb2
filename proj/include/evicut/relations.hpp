#pragma once
// Atomic answers and the symmetric entailment / contradiction matrices that
// drive everything downstream. Directed NLI-style scores come from a
// ScoringProvider; we symmetrize them with a geometric mean so a high pair
// score requires agreement in both directions.

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace evicut {

struct AtomicAnswer {
    int doc_index = 0;  // 0-based rank within the retrieved list
    std::string text;
    bool informative = true;
};

// Directed scores for one ordered pair (fwd = i->j, bwd = j->i).
struct DirectedRelationScores {
    double entail_fwd = 0.0;
    double entail_bwd = 0.0;
    double contra_fwd = 0.0;
    double contra_bwd = 0.0;
};

struct SymmetricRelation {
    double m = 0.0;  // entailment strength
    double c = 0.0;  // contradiction strength
};

// Symmetric k x k matrices over the informative answers, in doc_index order.
// Diagonal convention: m(i,i) = 1, c(i,i) = 0.
struct RelationMatrices {
    Eigen::MatrixXd m;
    Eigen::MatrixXd c;
    int k = 0;
};

// Abstracts the single-document answer generator, the pairwise NLI scorer and
// the embedding encoder. Implementations must tolerate concurrent score_pair
// calls; everything returned is by value.
class ScoringProvider {
public:
    virtual ~ScoringProvider() = default;

    // Answer `query` using only `doc_text`; informative=false marks documents
    // that carry no usable claim. doc_index is filled in by the caller.
    virtual AtomicAnswer generate_atomic(const std::string& query,
                                         const std::string& doc_text) = 0;

    // Scores both directions of the unordered pair {a, b} in one call.
    virtual DirectedRelationScores score_pair(const std::string& a,
                                              const std::string& b) = 0;

    // Unit-norm embedding of `text`.
    virtual Eigen::VectorXd embed(const std::string& text) = 0;

    // Batch hook. The default loops score_pair; remote transports override it
    // to cut round trips.
    virtual std::vector<DirectedRelationScores> score_pairs(
        const std::vector<std::pair<std::string, std::string>>& pairs);
};

// Geometric-mean symmetrization: m = sqrt(fwd*bwd), c likewise.
// Throws std::invalid_argument naming the offending field if any input is
// outside [0,1].
SymmetricRelation symmetrize(const DirectedRelationScores& scores);

// Positions (within `answers`) of informative answers, sorted by doc_index.
std::vector<int> informative_indices(const std::vector<AtomicAnswer>& answers);

// Builds M and C over the informative answers only, scoring each unordered
// pair exactly once. Throws if no answer is informative or doc_index values
// collide.
RelationMatrices build_matrices(const std::vector<AtomicAnswer>& answers,
                                ScoringProvider& provider);

}  // namespace evicut
