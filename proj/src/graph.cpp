#include "cofcheck/graph.hpp"

#include "cofcheck/errors.hpp"

#include <algorithm>
#include <thread>

namespace cofcheck {

schedule configuration_graph::path_from_root(int node) const {
    schedule s;
    for (int n = node; parent_node[n] != -1; n = parent_node[n]) s.push_back(parent_proc[n]);
    std::reverse(s.begin(), s.end());
    return s;
}

namespace {

} // namespace

configuration_graph build_configuration_graph(const algorithm& alg, std::size_t budget,
                                              int threads) {
    configuration_graph g;
    g.nprocs = alg.process_count();
    const int np = g.nprocs;

    g.nodes.push_back(alg.initial_configuration());
    g.index.emplace(g.nodes[0], 0);
    g.parent_node.push_back(-1);
    g.parent_proc.push_back(-1);

    std::size_t layer_begin = 0;
    while (layer_begin < g.nodes.size()) {
        const std::size_t layer_end = g.nodes.size();
        std::vector<std::optional<configuration>> next(
            static_cast<std::size_t>(layer_end - layer_begin) * np);

        const std::size_t width = layer_end - layer_begin;
        auto expand = [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i)
                for (int p = 0; p < np; ++p) {
                    const configuration& c = g.nodes[layer_begin + i];
                    if (!alg.halted(c, p)) next[i * np + p] = alg.apply_step(c, p);
                }
        };
        if (threads > 1 && width > 64) {
            std::vector<std::thread> pool;
            const std::size_t chunk = (width + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                std::size_t b = std::min(width, static_cast<std::size_t>(t) * chunk);
                std::size_t e = std::min(width, b + chunk);
                if (b < e) pool.emplace_back(expand, b, e);
            }
            for (auto& th : pool) th.join();
        } else {
            expand(0, width);
        }

        // Sequential merge keeps node numbering independent of threading.
        for (std::size_t i = 0; i < width; ++i) {
            for (int p = 0; p < np; ++p) {
                auto& succ_cfg = next[i * np + p];
                if (!succ_cfg) {
                    g.succ.push_back(-1);
                    continue;
                }
                auto [it, fresh] = g.index.emplace(*succ_cfg, static_cast<int>(g.nodes.size()));
                if (fresh) {
                    if (g.nodes.size() >= budget)
                        throw budget_error("configuration budget of " + std::to_string(budget) +
                                               " exhausted",
                                           g.nodes.size());
                    g.nodes.push_back(std::move(*succ_cfg));
                    g.parent_node.push_back(static_cast<int>(layer_begin + i));
                    g.parent_proc.push_back(p);
                }
                g.succ.push_back(it->second);
                ++g.edge_count;
            }
        }
        layer_begin = layer_end;
    }
    return g;
}

scc_result strongly_connected_components(std::size_t n_nodes, int nprocs,
                                         const std::vector<int>& succ,
                                         const std::vector<bool>& edge_enabled,
                                         const std::vector<bool>& node_enabled) {
    scc_result res;
    res.component.assign(n_nodes, -1);

    std::vector<int> low(n_nodes, -1), disc(n_nodes, -1);
    std::vector<bool> on_stack(n_nodes, false);
    std::vector<int> stack;
    int timer = 0;

    struct frame {
        int node;
        int next_edge; // process index to try next
    };
    std::vector<frame> call;

    auto edge_target = [&](int n, int q) -> int {
        std::size_t e = static_cast<std::size_t>(n) * nprocs + q;
        if (!edge_enabled[e]) return -1;
        int m = succ[e];
        if (m < 0 || !node_enabled[m]) return -1;
        return m;
    };

    for (std::size_t start = 0; start < n_nodes; ++start) {
        if (!node_enabled[start] || disc[start] != -1) continue;
        call.push_back({static_cast<int>(start), 0});
        while (!call.empty()) {
            frame& f = call.back();
            int n = f.node;
            if (f.next_edge == 0) {
                disc[n] = low[n] = timer++;
                stack.push_back(n);
                on_stack[n] = true;
            }
            bool descended = false;
            while (f.next_edge < nprocs) {
                int m = edge_target(n, f.next_edge++);
                if (m < 0) continue;
                if (disc[m] == -1) {
                    call.push_back({m, 0});
                    descended = true;
                    break;
                }
                if (on_stack[m]) low[n] = std::min(low[n], disc[m]);
            }
            if (descended) continue;
            if (low[n] == disc[n]) {
                while (true) {
                    int m = stack.back();
                    stack.pop_back();
                    on_stack[m] = false;
                    res.component[m] = res.count;
                    if (m == n) break;
                }
                ++res.count;
            }
            call.pop_back();
            if (!call.empty()) {
                int parent = call.back().node;
                low[parent] = std::min(low[parent], low[n]);
            }
        }
    }
    return res;
}

} // namespace cofcheck
