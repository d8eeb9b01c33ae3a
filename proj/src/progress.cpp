#include "cofcheck/progress.hpp"

#include "cofcheck/errors.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cofcheck {

std::string to_string(progress_condition c) {
    switch (c) {
    case progress_condition::wait_free: return "wf";
    case progress_condition::obstruction_free: return "of";
    case progress_condition::conflict_obstruction_free: return "cof";
    }
    return "?";
}

std::optional<progress_condition> parse_progress_condition(const std::string& s) {
    if (s == "wf") return progress_condition::wait_free;
    if (s == "of") return progress_condition::obstruction_free;
    if (s == "cof") return progress_condition::conflict_obstruction_free;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lasso classification.

lasso_replay replay_lasso(const algorithm& alg, const lasso& l) {
    lasso_replay r;
    auto pre = alg.run(alg.initial_configuration(), l.prefix);
    if (!(pre.final == l.anchor))
        throw usage_error("lasso prefix does not reach the anchor configuration");
    r.prefix = std::move(pre.trace);

    r.anchor_resp.assign(alg.process_count(), 0);
    for (const auto& e : r.prefix)
        if (e.response) ++r.anchor_resp[e.process];

    auto c1 = alg.run(l.anchor, l.cycle, r.anchor_resp);
    if (!(c1.final == l.anchor)) throw usage_error("lasso cycle does not close on the anchor");
    if (c1.trace.empty()) throw usage_error("lasso cycle takes no effective step");
    r.cycle = std::move(c1.trace);

    std::vector<int> resp2 = r.anchor_resp;
    for (const auto& e : r.cycle)
        if (e.response) ++resp2[e.process];
    r.cycle2 = alg.run(l.anchor, l.cycle, resp2).trace;
    return r;
}

std::vector<instance_status> instance_statuses(const algorithm& alg, const lasso& l,
                                               const conflict_relation& cr) {
    auto r = replay_lasso(alg, l);
    std::vector<algorithm::trace_entry> all = r.prefix;
    all.insert(all.end(), r.cycle.begin(), r.cycle.end());

    std::vector<instance_status> out;
    std::map<std::pair<int, int>, std::size_t> slot;
    const std::size_t prefix_len = r.prefix.size();
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto& e = all[i];
        auto key = std::make_pair(e.process, e.instance_index);
        auto it = slot.find(key);
        if (it == slot.end()) {
            it = slot.emplace(key, out.size()).first;
            out.push_back({e.process, e.instance_index, e.op, std::nullopt, false, false});
        }
        auto& st = out[it->second];
        if (e.response && !st.completed_at) st.completed_at = static_cast<int>(i);
        if (i >= prefix_len) st.steps_in_cycle = true;
    }
    for (auto& st : out)
        for (const auto& e : r.cycle)
            if (e.process != st.process && cr.conflicts(st.op, e.op))
                st.conflicting_steps_in_cycle = true;
    return out;
}

namespace {

// Steps of instance (p, k) across prefix and both unrollings; usage_error if none.
struct replay_view {
    lasso_replay r;
    bool completed_in_first = false; // within prefix . cycle
};

replay_view view_for(const algorithm& alg, const lasso& l, int p, int k) {
    replay_view v{replay_lasso(alg, l), false};
    bool invoked = false;
    auto scan = [&](const std::vector<algorithm::trace_entry>& t, bool first_part) {
        for (const auto& e : t)
            if (e.process == p && e.instance_index == k) {
                invoked = true;
                if (first_part && e.response) v.completed_in_first = true;
            }
    };
    scan(v.r.prefix, true);
    scan(v.r.cycle, true);
    scan(v.r.cycle2, false);
    if (!invoked)
        throw usage_error("instance " + std::to_string(k) + " of process " +
                          alg.proc(p).name + " is never invoked in this lasso");
    return v;
}

} // namespace

bool instance_completes_in(const algorithm& alg, const lasso& l, int p, int k) {
    return view_for(alg, l, p, k).completed_in_first;
}

bool eventually_scf(const algorithm& alg, const lasso& l, int p, int k) {
    auto v = view_for(alg, l, p, k);
    if (v.completed_in_first) return true;
    for (const auto& e : v.r.cycle)
        if (e.process != p || e.instance_index != k) return false;
    return true;
}

bool eventually_conflict_scf(const algorithm& alg, const lasso& l, int p, int k,
                             const conflict_relation& cr) {
    auto v = view_for(alg, l, p, k);
    if (v.completed_in_first) return true;
    const std::string op = alg.instance_op(p, k);
    for (const auto& e : v.r.cycle)
        if (e.process != p && cr.conflicts(op, e.op)) return false;
    return true;
}

bool correct_in(const algorithm& alg, const lasso& l, int p) {
    auto r = replay_lasso(alg, l);
    for (const auto& e : r.cycle)
        if (e.process == p) return true;
    int pend = alg.pending_instance(l.anchor, p);
    if (pend < 0) return true; // halted: nothing outstanding
    // Pending only if the current instance was actually invoked (took a step).
    for (const auto& e : r.prefix)
        if (e.process == p && e.instance_index == pend) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Whole-algorithm verdicts.

namespace {

struct subgraph_masks {
    std::vector<bool> node_enabled;
    std::vector<bool> edge_enabled;
};

// Nodes where instance (p, k) is the pending one; edges permitted by the
// contention predicate of `cond`.
subgraph_masks masks_for(const algorithm& alg, const configuration_graph& g,
                         const std::vector<std::vector<int>>& pend, int p, int k,
                         progress_condition cond, const conflict_relation& cr) {
    const int np = g.nprocs;
    const std::size_t n = g.nodes.size();
    subgraph_masks m;
    m.node_enabled.assign(n, false);
    m.edge_enabled.assign(n * np, false);
    const std::string op = alg.instance_op(p, k);
    for (std::size_t u = 0; u < n; ++u) {
        if (pend[u][p] != k) continue;
        m.node_enabled[u] = true;
        for (int q = 0; q < np; ++q) {
            int v = g.successor(static_cast<int>(u), q);
            if (v < 0) continue;
            bool ok = true;
            switch (cond) {
            case progress_condition::wait_free: break;
            case progress_condition::obstruction_free: ok = (q == p); break;
            case progress_condition::conflict_obstruction_free:
                ok = (q == p) || !cr.conflicts(op, alg.instance_op(q, pend[u][q]));
                break;
            }
            m.edge_enabled[u * np + q] = ok;
        }
    }
    // Edges must stay inside the enabled node set.
    for (std::size_t u = 0; u < n; ++u)
        for (int q = 0; q < np; ++q) {
            std::size_t e = u * np + q;
            if (!m.edge_enabled[e]) continue;
            int v = g.succ[e];
            if (!m.node_enabled[u] || v < 0 || pend[v][p] != k) m.edge_enabled[e] = false;
        }
    return m;
}

// Deterministic closed walk from u back to u through enabled edges, starting
// with the edge u -q0-> first. Returns the process schedule.
schedule closed_walk(const configuration_graph& g, const subgraph_masks& m,
                     const std::vector<int>& comp, int u, int q0) {
    const int np = g.nprocs;
    schedule cyc{q0};
    int cur = g.successor(u, q0);
    if (cur == u) return cyc;
    // BFS back to u inside the component.
    std::vector<int> from(g.nodes.size(), -1), via(g.nodes.size(), -1);
    std::vector<int> queue{cur};
    from[cur] = cur;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        int x = queue[h];
        if (x == u) break;
        for (int q = 0; q < np; ++q) {
            std::size_t e = static_cast<std::size_t>(x) * np + q;
            if (!m.edge_enabled[e]) continue;
            int y = g.succ[e];
            if (comp[y] != comp[u] || from[y] != -1) continue;
            from[y] = x;
            via[y] = q;
            queue.push_back(y);
        }
    }
    if (from[u] == -1) throw std::logic_error("component lost its way back to the cycle root");
    schedule back;
    for (int x = u; x != cur; x = from[x]) back.push_back(via[x]);
    std::reverse(back.begin(), back.end());
    cyc.insert(cyc.end(), back.begin(), back.end());
    return cyc;
}

} // namespace

progress_verdict find_violation(const algorithm& alg, progress_condition condition,
                                const conflict_relation& cr, std::size_t budget, int threads) {
    for (int p = 0; p < alg.process_count(); ++p)
        if (!alg.proc(p).annotation_consistent)
            throw usage_error("process " + alg.proc(p).name +
                              " has no consistent instance structure; progress verdicts "
                              "require bounded operation sequences");

    progress_verdict verdict;
    verdict.condition = condition;

    configuration_graph g = build_configuration_graph(alg, budget, threads);
    const int np = g.nprocs;
    verdict.stats.states = g.nodes.size();
    verdict.stats.edges = g.edge_count;
    {
        std::vector<bool> all_nodes(g.nodes.size(), true), all_edges(g.succ.size(), true);
        verdict.stats.scc_count = static_cast<std::size_t>(
            strongly_connected_components(g.nodes.size(), np, g.succ, all_edges, all_nodes).count);
    }

    // Pending instance per (node, process); -1 when halted.
    std::vector<std::vector<int>> pend(g.nodes.size(), std::vector<int>(np));
    std::vector<std::vector<int>> candidate_instances(np);
    for (std::size_t u = 0; u < g.nodes.size(); ++u)
        for (int p = 0; p < np; ++p) {
            pend[u][p] = alg.pending_instance(g.nodes[u], p);
            auto& ks = candidate_instances[p];
            if (pend[u][p] >= 0 &&
                std::find(ks.begin(), ks.end(), pend[u][p]) == ks.end())
                ks.push_back(pend[u][p]);
        }
    for (auto& ks : candidate_instances) std::sort(ks.begin(), ks.end());

    for (int p = 0; p < np && verdict.holds; ++p) {
        for (int k : candidate_instances[p]) {
            auto m = masks_for(alg, g, pend, p, k, condition, cr);
            auto scc = strongly_connected_components(g.nodes.size(), np, g.succ, m.edge_enabled,
                                                     m.node_enabled);
            // A violation is a component with an internal edge driven by p.
            int root_node = -1, root_edge = -1;
            for (std::size_t u = 0; u < g.nodes.size() && root_node < 0; ++u) {
                if (scc.component[u] < 0) continue;
                std::size_t e = u * np + p;
                if (!m.edge_enabled[e]) continue;
                int v = g.succ[e];
                if (scc.component[v] == scc.component[u]) {
                    root_node = static_cast<int>(u);
                    root_edge = p;
                }
            }
            if (root_node < 0) continue;

            progress_witness w;
            w.process = p;
            w.instance = k;
            w.op = alg.instance_op(p, k);
            w.l.prefix = g.path_from_root(root_node);
            w.l.anchor = g.nodes[root_node];
            w.l.cycle = closed_walk(g, m, scc.component, root_node, root_edge);

            // Independent re-check by replay before trusting the search.
            auto resp = alg.run(alg.initial_configuration(), w.l.prefix);
            auto closed = close_lasso(alg, w.l.anchor, w.l.cycle, [&] {
                std::vector<int> counts(np, 0);
                for (const auto& t : resp.trace)
                    if (t.response) ++counts[t.process];
                return counts;
            }());
            bool confirmed = closed.has_value() && correct_in(alg, w.l, p);
            if (confirmed) switch (condition) {
                case progress_condition::wait_free:
                    confirmed = !instance_completes_in(alg, w.l, p, k);
                    break;
                case progress_condition::obstruction_free:
                    confirmed = eventually_scf(alg, w.l, p, k) &&
                                !instance_completes_in(alg, w.l, p, k);
                    break;
                case progress_condition::conflict_obstruction_free:
                    confirmed = eventually_conflict_scf(alg, w.l, p, k, cr) &&
                                !instance_completes_in(alg, w.l, p, k);
                    break;
                }
            if (!confirmed)
                throw std::logic_error("violation witness failed its replay re-check");
            verdict.holds = false;
            verdict.witness = std::move(w);
            break;
        }
    }
    return verdict;
}

} // namespace cofcheck
