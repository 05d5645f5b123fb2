#include "evicut/relations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "evicut/util.hpp"

namespace evicut {

std::vector<DirectedRelationScores> ScoringProvider::score_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::vector<DirectedRelationScores> out;
    out.reserve(pairs.size());
    for (const auto& [a, b] : pairs) out.push_back(score_pair(a, b));
    return out;
}

SymmetricRelation symmetrize(const DirectedRelationScores& s) {
    require_unit(s.entail_fwd, "entail_fwd");
    require_unit(s.entail_bwd, "entail_bwd");
    require_unit(s.contra_fwd, "contra_fwd");
    require_unit(s.contra_bwd, "contra_bwd");
    return {std::sqrt(s.entail_fwd * s.entail_bwd),
            std::sqrt(s.contra_fwd * s.contra_bwd)};
}

std::vector<int> informative_indices(const std::vector<AtomicAnswer>& answers) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(answers.size()); ++i)
        if (answers[i].informative) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return answers[a].doc_index < answers[b].doc_index;
    });
    return idx;
}

RelationMatrices build_matrices(const std::vector<AtomicAnswer>& answers,
                                ScoringProvider& provider) {
    const std::vector<int> idx = informative_indices(answers);
    const int k = static_cast<int>(idx.size());
    if (k == 0)
        throw std::invalid_argument(
            "build_matrices: no informative answers (empty evidence)");

    std::unordered_set<int> seen;
    for (const AtomicAnswer& a : answers)
        if (!seen.insert(a.doc_index).second)
            throw std::invalid_argument(
                "build_matrices: duplicate doc_index " + std::to_string(a.doc_index));

    RelationMatrices out;
    out.k = k;
    out.m = Eigen::MatrixXd::Identity(k, k);
    out.c = Eigen::MatrixXd::Zero(k, k);

    // One provider call per unordered pair; both directions come back together.
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(static_cast<size_t>(k) * (k - 1) / 2);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            pairs.emplace_back(answers[idx[i]].text, answers[idx[j]].text);

    const std::vector<DirectedRelationScores> scored = provider.score_pairs(pairs);
    if (scored.size() != pairs.size())
        throw std::runtime_error("build_matrices: provider returned " +
                                 std::to_string(scored.size()) + " scores for " +
                                 std::to_string(pairs.size()) + " pairs");

    size_t p = 0;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j, ++p) {
            const SymmetricRelation rel = symmetrize(scored[p]);
            out.m(i, j) = out.m(j, i) = rel.m;
            out.c(i, j) = out.c(j, i) = rel.c;
        }
    }
    return out;
}

}  // namespace evicut
