#pragma once
// Global-consensus scores: eigenvector centrality of the entailment matrix,
// approximated by a fixed number of power-iteration steps and rescaled into
// [0,1].

#include <Eigen/Dense>

namespace evicut {

struct CentralityConfig {
    double epsilon = 0.01;  // self-loop weight added to the adjacency matrix
    int iterations = 10;    // power-iteration steps (fixed, no convergence test)
    double delta = 1e-8;    // guards the l2 norm and the rescale denominator
};

struct CentralityVector {
    Eigen::VectorXd v;    // rescaled into [0,1]
    Eigen::VectorXd raw;  // power-iteration estimate before rescaling
};

// Power iteration on A = m + epsilon*I from the uniform start vector,
// l2-normalizing each step, then min-max rescaled.
//
// When the raw iterate is uniform to within 1e-9 the literal rescale would
// map every component to ~0 and zero out all source capacities downstream;
// in that case every component is set to 1.0 instead.
//
// Throws std::invalid_argument if m is not symmetric, has entries outside
// [0,1], or is empty.
CentralityVector eigencentrality(const Eigen::MatrixXd& m,
                                 const CentralityConfig& cfg = {});

}  // namespace evicut
