#include "evicut/energy.hpp"

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace evicut {

double rank_weight(int rank, int list_size) {
    if (list_size < 1) {
        throw std::invalid_argument("rank_weight: list_size must be >= 1");
    }
    if (rank < 1 || rank > list_size) {
        throw std::invalid_argument("rank_weight: rank " + std::to_string(rank) +
                                    " outside [1, " + std::to_string(list_size) + "]");
    }
    return std::exp(-static_cast<double>(rank) / static_cast<double>(list_size));
}

TerminalCapacities terminal_capacities(const CentralityVector& v,
                                       const Eigen::MatrixXd& c,
                                       const std::vector<int>& ranks,
                                       int list_size) {
    const auto k = v.v.size();
    if (c.rows() != k || c.cols() != k) {
        throw std::invalid_argument("terminal_capacities: contradiction matrix size mismatch");
    }
    if (static_cast<Eigen::Index>(ranks.size()) != k) {
        throw std::invalid_argument("terminal_capacities: ranks size mismatch");
    }

    TerminalCapacities caps;
    caps.s_cap.resize(k);
    caps.f_cap.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        caps.s_cap(i) = v.v(i) * rank_weight(ranks[i], list_size);

        double num = 0.0;
        double den = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (j == i) continue;
            num += c(i, j) * v.v(j);
            den += v.v(j);
        }
        caps.f_cap(i) = den > 0.0 ? num / den : 0.0;
    }
    return caps;
}

FlowNetwork build_static_graph(const TerminalCapacities& caps,
                               const Eigen::MatrixXd& m,
                               double quantum) {
    const auto k = caps.s_cap.size();
    if (caps.f_cap.size() != k) {
        throw std::invalid_argument("build_static_graph: capacity vectors disagree on size");
    }
    if (m.rows() != k || m.cols() != k) {
        throw std::invalid_argument("build_static_graph: pairwise matrix size mismatch");
    }
    if (quantum <= 0.0) {
        throw std::invalid_argument("build_static_graph: quantum must be positive");
    }

    FlowNetwork net;
    net.doc_count = static_cast<int>(k);
    net.source_id = net.doc_count;
    net.sink_id = net.doc_count + 1;
    net.node_count = net.doc_count + 2;
    net.quantum = quantum;
    net.edges.reserve(static_cast<size_t>(k) * (k + 1));

    for (int i = 0; i < net.doc_count; ++i) {
        if (caps.s_cap(i) < 0.0 || caps.f_cap(i) < 0.0) {
            throw std::invalid_argument("build_static_graph: negative terminal capacity");
        }
        net.edges.push_back({net.source_id, i, caps.s_cap(i)});
        net.edges.push_back({i, net.sink_id, caps.f_cap(i)});
    }
    for (int i = 0; i < net.doc_count; ++i) {
        for (int j = i + 1; j < net.doc_count; ++j) {
            const double w = m(i, j);
            if (w < 0.0) {
                throw std::invalid_argument("build_static_graph: negative pairwise weight breaks submodularity");
            }
            if (quantize(w, quantum) == 0) continue;
            net.edges.push_back({i, j, w});
            net.edges.push_back({j, i, w});
        }
    }
    return net;
}

EnergyValue energy_of(const std::vector<int>& labeling,
                      const TerminalCapacities& caps,
                      const Eigen::MatrixXd& m) {
    const auto k = caps.s_cap.size();
    if (static_cast<Eigen::Index>(labeling.size()) != k) {
        throw std::invalid_argument("energy_of: labeling size mismatch");
    }

    EnergyValue e;
    for (Eigen::Index i = 0; i < k; ++i) {
        if (labeling[i] != 0 && labeling[i] != 1) {
            throw std::invalid_argument("energy_of: labels must be 0 or 1");
        }
        if (labeling[i] == 1) {
            e.unary_sink += caps.f_cap(i);
        } else {
            e.unary_source += caps.s_cap(i);
        }
    }
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i + 1; j < k; ++j) {
            if (labeling[i] != labeling[j]) e.pairwise += m(i, j);
        }
    }
    e.total = e.unary_source + e.unary_sink + e.pairwise;
    return e;
}

void write_debug_dump(const FlowNetwork& net, std::ostream& os) {
    os << "# nodes=" << net.node_count << '\n';
    os << "# docs=" << net.doc_count << '\n';
    os << "# source=" << net.source_id << '\n';
    os << "# sink=" << net.sink_id << '\n';
    os << "# memory=" << net.memory_id << '\n';
    os << "# quantum=" << net.quantum << '\n';
    os.precision(17);
    for (const auto& e : net.edges) {
        os << e.from << ' ' << e.to << ' ' << e.capacity << '\n';
    }
}

FlowNetwork read_debug_dump(std::istream& is) {
    FlowNetwork net;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            key.erase(key.find_last_not_of(' ') + 1);
            const std::string val = line.substr(eq + 1);
            if (key == "nodes") net.node_count = std::stoi(val);
            else if (key == "docs") net.doc_count = std::stoi(val);
            else if (key == "source") net.source_id = std::stoi(val);
            else if (key == "sink") net.sink_id = std::stoi(val);
            else if (key == "memory") net.memory_id = std::stoi(val);
            else if (key == "quantum") net.quantum = std::stod(val);
            continue;
        }
        std::istringstream ls(line);
        FlowEdge e;
        if (!(ls >> e.from >> e.to >> e.capacity)) {
            throw std::runtime_error("read_debug_dump: malformed edge line: " + line);
        }
        net.edges.push_back(e);
    }
    if (net.node_count <= 0 || net.source_id < 0 || net.sink_id < 0) {
        throw std::runtime_error("read_debug_dump: missing or incomplete header");
    }
    return net;
}

}  // namespace evicut
