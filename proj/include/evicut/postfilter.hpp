#pragma once
// Drops semantically isolated survivors: an item stays only if its mean
// cosine similarity to the other survivors clears the threshold.

#include <string>
#include <vector>

#include "evicut/relations.hpp"

namespace evicut {

inline constexpr double kDefaultLambda = 0.3;

struct FilterReport {
    std::vector<int> kept;         // indices into the input list
    std::vector<int> dropped;
    std::vector<double> avg_sims;  // s_i per input item
    double lambda = kDefaultLambda;
};

// One-shot pass (never iterated): s_i = mean cosine similarity of item i's
// embedding against every other item. A single item has no peers; it is kept
// unconditionally and its s_i reported as 1. lambda must lie in [-1, 1];
// cosine similarity can be negative, so negative thresholds are meaningful.
FilterReport filter_isolated(const std::vector<std::string>& items,
                             ScoringProvider& provider,
                             double lambda = kDefaultLambda);

}  // namespace evicut
