#pragma once
// Static s-t network construction and direct energy evaluation.
//
// The binary-labeling objective is
//   E(y) = sum_i [ y_i*F_i + (1-y_i)*S_i ] + sum_{i<j} M_ij * |y_i - y_j|
// and the network below is built so that the capacity of any s-t cut equals
// E(y) of the induced labeling: source edges carry S_i, sink edges carry F_i,
// and each document pair gets anti-parallel edges of capacity M_ij.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "evicut/centrality.hpp"

namespace evicut {

// Capacities are quantized to integer multiples of this inside the flow
// solver so that push-relabel terminates; all energy comparisons use the
// tolerance (k^2 + 2k) * quantum.
inline constexpr double kDefaultQuantum = 1e-6;

struct TerminalCapacities {
    Eigen::VectorXd s_cap;  // source -> doc_i, S_i
    Eigen::VectorXd f_cap;  // doc_i -> sink, F_i
};

struct FlowEdge {
    int from = 0;
    int to = 0;
    double capacity = 0.0;
};

// Node ids: documents 0..doc_count-1, then source, sink, and (optionally)
// the memory node.
struct FlowNetwork {
    int node_count = 0;
    int doc_count = 0;
    int source_id = -1;
    int sink_id = -1;
    int memory_id = -1;  // -1 when absent
    double quantum = kDefaultQuantum;
    std::vector<FlowEdge> edges;

    bool has_memory() const { return memory_id >= 0; }
};

struct EnergyValue {
    double total = 0.0;
    double unary_source = 0.0;  // sum of S_i over y_i = 0
    double unary_sink = 0.0;    // sum of F_i over y_i = 1
    double pairwise = 0.0;      // sum of M_ij over y_i != y_j
};

inline int64_t quantize(double capacity, double quantum) {
    return static_cast<int64_t>(std::llround(capacity / quantum));
}

inline double energy_tolerance(int k, double quantum = kDefaultQuantum) {
    return (static_cast<double>(k) * k + 2.0 * k) * quantum;
}

// w_rank(i) = exp(-i/k) for 1-based rank i in a list of size list_size.
// Throws std::invalid_argument if rank is outside [1, list_size].
double rank_weight(int rank, int list_size);

// S_i = v_i * w_rank(rank_i); F_i = centrality-weighted mean of the
// off-diagonal contradiction row, or 0 when there are no weighted peers
// (k == 1 or all other centralities are zero). `list_size` is the size of
// the retrieved list the ranks refer to (ranks may be sparse after
// uninformative documents were dropped).
TerminalCapacities terminal_capacities(const CentralityVector& v,
                                       const Eigen::MatrixXd& c,
                                       const std::vector<int>& ranks,
                                       int list_size);

// Network with one source and one sink edge per document and anti-parallel
// M_ij edges per pair; pair edges whose capacity quantizes to 0 are dropped.
// Validates M_ij >= 0 (the submodularity condition).
FlowNetwork build_static_graph(const TerminalCapacities& caps,
                               const Eigen::MatrixXd& m,
                               double quantum = kDefaultQuantum);

// Direct evaluation of E(y); each unordered pair counted once.
EnergyValue energy_of(const std::vector<int>& labeling,
                      const TerminalCapacities& caps,
                      const Eigen::MatrixXd& m);

// Line-oriented debug dump (one edge per line: from, to, capacity) for
// external max-flow cross-checks. Header metadata rides in '#' comments.
void write_debug_dump(const FlowNetwork& net, std::ostream& os);
FlowNetwork read_debug_dump(std::istream& is);

}  // namespace evicut
