#pragma once
// Exhaustive oracles: enumerate every labeling to find minimum energies and
// cut capacities the fast path must match.

#include <cstdint>
#include <limits>
#include <vector>

#include "evicut/energy.hpp"

namespace evicut::testing {

inline std::vector<int> bits_of(uint32_t mask, int k) {
    std::vector<int> y(k);
    for (int i = 0; i < k; ++i) y[i] = (mask >> i) & 1;
    return y;
}

// Minimum of energy_of over all 2^k labelings; optionally reports the first
// argmin in mask order.
inline double brute_force_min_energy(const TerminalCapacities& caps,
                                     const Eigen::MatrixXd& m,
                                     std::vector<int>* argmin = nullptr) {
    const int k = static_cast<int>(caps.s_cap.size());
    double best = std::numeric_limits<double>::infinity();
    for (uint32_t mask = 0; mask < (1u << k); ++mask) {
        const auto y = bits_of(mask, k);
        const double e = energy_of(y, caps, m).total;
        if (e < best) {
            best = e;
            if (argmin) *argmin = y;
        }
    }
    return best;
}

// Capacity of the cut induced by a side assignment (1 = source side).
// Document i takes y[i]; the memory node, when present, takes mem_label.
inline double cut_capacity(const FlowNetwork& net, const std::vector<int>& y,
                           int mem_label = 0) {
    auto side = [&](int node) -> int {
        if (node == net.source_id) return 1;
        if (node == net.sink_id) return 0;
        if (node == net.memory_id) return mem_label;
        return y[node];
    };
    double total = 0.0;
    for (const auto& e : net.edges) {
        if (side(e.from) == 1 && side(e.to) == 0) total += e.capacity;
    }
    return total;
}

// Same cut in the solver's integer units.
inline int64_t cut_capacity_units(const FlowNetwork& net, const std::vector<int>& y,
                                  int mem_label = 0) {
    auto side = [&](int node) -> int {
        if (node == net.source_id) return 1;
        if (node == net.sink_id) return 0;
        if (node == net.memory_id) return mem_label;
        return y[node];
    };
    int64_t total = 0;
    for (const auto& e : net.edges) {
        if (side(e.from) == 1 && side(e.to) == 0) total += quantize(e.capacity, net.quantum);
    }
    return total;
}

// Minimum cut capacity over all document labelings (and memory labels when a
// memory node exists), reporting the argmin sides.
inline double brute_force_min_cut(const FlowNetwork& net, std::vector<int>* best_y = nullptr,
                                  int* best_mem = nullptr) {
    const int k = net.doc_count;
    double best = std::numeric_limits<double>::infinity();
    const int mem_labels = net.has_memory() ? 2 : 1;
    for (uint32_t mask = 0; mask < (1u << k); ++mask) {
        const auto y = bits_of(mask, k);
        for (int mem = 0; mem < mem_labels; ++mem) {
            const double c = cut_capacity(net, y, mem);
            if (c < best) {
                best = c;
                if (best_y) *best_y = y;
                if (best_mem) *best_mem = mem;
            }
        }
    }
    return best;
}

}  // namespace evicut::testing
