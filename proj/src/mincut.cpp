#include "evicut/mincut.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace evicut {

namespace {
constexpr int kUnset = std::numeric_limits<int>::max();
}

MaxFlowSolver::MaxFlowSolver(const FlowNetwork& net)
    : n_(net.node_count),
      source_(net.source_id),
      sink_(net.sink_id),
      doc_count_(net.doc_count),
      memory_(net.memory_id),
      quantum_(net.quantum) {
    if (n_ < 2) throw std::invalid_argument("MaxFlowSolver: need at least source and sink");
    if (source_ < 0 || source_ >= n_ || sink_ < 0 || sink_ >= n_ || source_ == sink_) {
        throw std::invalid_argument("MaxFlowSolver: bad source/sink ids");
    }
    if (quantum_ <= 0.0) throw std::invalid_argument("MaxFlowSolver: quantum must be positive");

    adj_.resize(n_);
    for (const auto& e : net.edges) {
        if (e.from < 0 || e.from >= n_ || e.to < 0 || e.to >= n_ || e.from == e.to) {
            throw std::invalid_argument("MaxFlowSolver: edge endpoint out of range");
        }
        if (e.capacity < 0.0) throw std::invalid_argument("MaxFlowSolver: negative capacity");
        add_arc(e.from, e.to, quantize(e.capacity, quantum_));
    }

    excess_.assign(n_, 0);
    height_.assign(n_, 0);
    cur_.assign(n_, 0);
    height_count_.assign(2 * n_ + 2, 0);
    bucket_.assign(2 * n_ + 2, {});
}

void MaxFlowSolver::add_arc(int from, int to, int64_t cap) {
    adj_[from].push_back({to, static_cast<int>(adj_[to].size()), cap});
    adj_[to].push_back({from, static_cast<int>(adj_[from].size()) - 1, 0});
}

void MaxFlowSolver::push_active(int u) {
    if (u == source_ || u == sink_) return;
    bucket_[height_[u]].push_back(u);
    highest_ = std::max(highest_, height_[u]);
}

double MaxFlowSolver::max_flow() {
    if (solved_) return static_cast<double>(flow_units_) * quantum_;

    height_[source_] = n_;
    for (auto& a : adj_[source_]) {
        if (a.cap <= 0) continue;
        const int64_t d = a.cap;
        a.cap = 0;
        adj_[a.to][a.rev].cap += d;
        excess_[a.to] += d;
        excess_[source_] -= d;
    }
    global_relabel();

    while (highest_ >= 0) {
        if (bucket_[highest_].empty()) {
            --highest_;
            continue;
        }
        const int u = bucket_[highest_].back();
        bucket_[highest_].pop_back();
        if (excess_[u] <= 0 || height_[u] != highest_) continue;  // stale entry
        discharge(u);
    }

    flow_units_ = excess_[sink_];
    solved_ = true;
    return static_cast<double>(flow_units_) * quantum_;
}

void MaxFlowSolver::discharge(int u) {
    while (excess_[u] > 0) {
        if (cur_[u] == static_cast<int>(adj_[u].size())) {
            relabel(u);
            cur_[u] = 0;
            if (height_[u] > 2 * n_) throw std::logic_error("MaxFlowSolver: height bound exceeded");
            if (++relabels_since_global_ >= n_) {
                global_relabel();
                return;  // buckets rebuilt; u re-queued if still active
            }
            continue;
        }
        Arc& a = adj_[u][cur_[u]];
        if (a.cap > 0 && height_[u] == height_[a.to] + 1) {
            const int64_t d = std::min(excess_[u], a.cap);
            a.cap -= d;
            adj_[a.to][a.rev].cap += d;
            excess_[u] -= d;
            const bool was_inactive = excess_[a.to] == 0;
            excess_[a.to] += d;
            if (was_inactive) push_active(a.to);
        } else {
            ++cur_[u];
        }
    }
}

void MaxFlowSolver::relabel(int u) {
    const int old = height_[u];
    int mh = kUnset;
    for (const auto& a : adj_[u]) {
        if (a.cap > 0) mh = std::min(mh, height_[a.to]);
    }
    height_[u] = mh == kUnset ? 2 * n_ : mh + 1;
    --height_count_[old];
    ++height_count_[height_[u]];

    // Gap heuristic: an emptied level below n strands every node between the
    // gap and n; lift them past the source so their excess flows back.
    if (height_count_[old] == 0 && old < n_) {
        for (int v = 0; v < n_; ++v) {
            if (v == source_ || v == sink_) continue;
            if (height_[v] > old && height_[v] < n_) {
                --height_count_[height_[v]];
                height_[v] = n_ + 1;
                ++height_count_[height_[v]];
                cur_[v] = 0;
                if (excess_[v] > 0) push_active(v);
            }
        }
    }
    if (excess_[u] > 0) push_active(u);
}

void MaxFlowSolver::global_relabel() {
    relabels_since_global_ = 0;

    // dist_to[x] = shortest residual distance from x to the BFS root; arcs are
    // walked backwards, testing the paired reverse arc for residual capacity.
    auto bfs_to = [this](int root, std::vector<int>& dist) {
        dist.assign(n_, kUnset);
        dist[root] = 0;
        std::deque<int> q{root};
        while (!q.empty()) {
            const int v = q.front();
            q.pop_front();
            for (const auto& a : adj_[v]) {
                const int u = a.to;
                if (dist[u] != kUnset) continue;
                if (adj_[u][a.rev].cap <= 0) continue;
                dist[u] = dist[v] + 1;
                q.push_back(u);
            }
        }
    };

    std::vector<int> to_sink, to_source;
    bfs_to(sink_, to_sink);
    bfs_to(source_, to_source);

    std::fill(height_count_.begin(), height_count_.end(), 0);
    for (auto& b : bucket_) b.clear();
    highest_ = -1;

    for (int u = 0; u < n_; ++u) {
        if (u == source_) {
            height_[u] = n_;
        } else if (to_sink[u] != kUnset) {
            height_[u] = to_sink[u];
        } else if (to_source[u] != kUnset) {
            height_[u] = n_ + to_source[u];
        } else {
            height_[u] = 2 * n_;
        }
        ++height_count_[height_[u]];
        cur_[u] = 0;
        if (excess_[u] > 0) push_active(u);
    }
}

std::vector<char> MaxFlowSolver::residual_reachable_from_source() const {
    std::vector<char> seen(n_, 0);
    seen[source_] = 1;
    std::deque<int> q{source_};
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        for (const auto& a : adj_[u]) {
            if (a.cap > 0 && !seen[a.to]) {
                seen[a.to] = 1;
                q.push_back(a.to);
            }
        }
    }
    return seen;
}

Labeling MaxFlowSolver::extract_labeling() const {
    if (!solved_) throw std::logic_error("extract_labeling: run max_flow first");

    const auto seen = residual_reachable_from_source();
    Labeling lab;
    lab.y.resize(doc_count_);
    for (int i = 0; i < doc_count_; ++i) lab.y[i] = seen[i] ? 1 : 0;
    lab.memory_kept = memory_ >= 0 && seen[memory_];
    lab.cut_value = static_cast<double>(flow_units_) * quantum_;
    return lab;
}

Labeling solve_mincut(const FlowNetwork& net) {
    MaxFlowSolver solver(net);
    solver.max_flow();
    return solver.extract_labeling();
}

}  // namespace evicut
