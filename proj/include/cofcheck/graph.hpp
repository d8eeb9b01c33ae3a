#pragma once

#include "cofcheck/execution.hpp"

#include <cstddef>
#include <unordered_map>
#include <vector>

namespace cofcheck {

// Reachable-configuration graph of an algorithm. Deterministic construction:
// BFS from the initial configuration, successors enumerated in process order.
struct configuration_graph {
    std::vector<configuration> nodes;
    std::unordered_map<configuration, int, configuration_hash> index;
    // succ[node * nprocs + p] = successor node, or -1 when p is halted
    std::vector<int> succ;
    std::vector<int> parent_node; // BFS tree, -1 at root
    std::vector<int> parent_proc;
    int nprocs = 0;
    std::size_t edge_count = 0;

    int root() const { return 0; }
    int successor(int node, int p) const { return succ[static_cast<std::size_t>(node) * nprocs + p]; }
    // Schedule taking the initial configuration to `node` along the BFS tree.
    schedule path_from_root(int node) const;
};

// Throws budget_error when more than `budget` configurations are reachable.
// With threads > 1 the frontier is expanded in parallel; the resulting graph
// is identical to the serial one.
configuration_graph build_configuration_graph(const algorithm& alg, std::size_t budget,
                                              int threads = 1);

// Condensation into strongly connected components (iterative Tarjan).
// Returns component ids; edges are supplied as a flat successor list with -1
// holes, plus an enabled-edge mask of the same shape.
struct scc_result {
    std::vector<int> component; // per node; -1 for excluded nodes
    int count = 0;
};
scc_result strongly_connected_components(std::size_t n_nodes, int nprocs,
                                         const std::vector<int>& succ,
                                         const std::vector<bool>& edge_enabled,
                                         const std::vector<bool>& node_enabled);

} // namespace cofcheck
