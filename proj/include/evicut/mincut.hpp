#pragma once
// Exact s-t max flow via highest-label preflow-push, plus extraction of the
// optimal labeling from residual reachability.

#include <cstdint>
#include <vector>

#include "evicut/energy.hpp"

namespace evicut {

struct Labeling {
    std::vector<int> y;        // per document: 1 = source side (kept), 0 = sink side
    bool memory_kept = false;  // meaningful only when the network has a memory node
    double cut_value = 0.0;    // max-flow value in unquantized units
};

// Push-relabel with highest-label selection, gap heuristic, and periodic
// global relabeling. Capacities are quantized to integer multiples of
// net.quantum, so the solver terminates and flow values are exact integers
// internally. The solve runs until all excess has drained (to the sink or
// back to the source), i.e. it produces a genuine max flow, not just a max
// preflow; residual reachability from s is then the canonical minimal
// source side shared by every maximum flow.
class MaxFlowSolver {
public:
    explicit MaxFlowSolver(const FlowNetwork& net);

    // Returns the max-flow value rescaled by the quantum. Idempotent.
    double max_flow();

    // Requires max_flow() to have run.
    Labeling extract_labeling() const;

    int64_t flow_units() const { return flow_units_; }

private:
    struct Arc {
        int to = 0;
        int rev = 0;
        int64_t cap = 0;
    };

    void add_arc(int from, int to, int64_t cap);
    void push_active(int u);
    void discharge(int u);
    void relabel(int u);
    void global_relabel();
    std::vector<char> residual_reachable_from_source() const;

    int n_ = 0;
    int source_ = 0;
    int sink_ = 0;
    int doc_count_ = 0;
    int memory_ = -1;
    double quantum_ = kDefaultQuantum;

    std::vector<std::vector<Arc>> adj_;
    std::vector<int64_t> excess_;
    std::vector<int> height_;
    std::vector<int> cur_;
    std::vector<int> height_count_;
    std::vector<std::vector<int>> bucket_;
    int highest_ = -1;
    int relabels_since_global_ = 0;
    int64_t flow_units_ = 0;
    bool solved_ = false;
};

// Convenience wrapper: build solver, run the flow, extract the labeling.
Labeling solve_mincut(const FlowNetwork& net);

}  // namespace evicut
