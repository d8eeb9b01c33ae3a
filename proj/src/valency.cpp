#include "cofcheck/valency.hpp"

#include "cofcheck/errors.hpp"
#include "cofcheck/history.hpp"
#include "cofcheck/linearizability.hpp"

#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace cofcheck {

namespace {

constexpr int kObserver1 = 1, kObserver2 = 2;

void require_three_processes(const algorithm& alg) {
    if (alg.process_count() != 3)
        throw usage_error("valency analysis is defined for the 3-process instance, got " +
                          std::to_string(alg.process_count()) + " processes");
}

std::set<std::string> decided_values(const algorithm& alg, const configuration& c) {
    std::set<std::string> out;
    for (int p = 0; p < alg.process_count(); ++p) {
        const auto& pr = alg.proc(p);
        if (pr.resp_count[c.local[p]] > 0) out.insert(*pr.last_response[c.local[p]]);
    }
    return out;
}

// Backward closure over {p1,p2} edges from the v-deciding nodes: marks every
// node from which a v-decision is {p1,p2}-reachable.
std::vector<bool> observer_reaches(const configuration_graph& g, const std::vector<bool>& seed) {
    std::vector<std::vector<int>> rev(g.nodes.size());
    for (std::size_t n = 0; n < g.nodes.size(); ++n)
        for (int p : {kObserver1, kObserver2}) {
            int s = g.successor(static_cast<int>(n), p);
            if (s >= 0 && static_cast<std::size_t>(s) != n) rev[s].push_back(static_cast<int>(n));
        }
    std::vector<bool> mark = seed;
    std::deque<int> work;
    for (std::size_t n = 0; n < mark.size(); ++n)
        if (mark[n]) work.push_back(static_cast<int>(n));
    while (!work.empty()) {
        int n = work.front();
        work.pop_front();
        for (int m : rev[n])
            if (!mark[m]) {
                mark[m] = true;
                work.push_back(m);
            }
    }
    return mark;
}

} // namespace

std::string to_string(valency_tag t) {
    switch (t) {
    case valency_tag::zero_valent: return "0-valent";
    case valency_tag::one_valent: return "1-valent";
    case valency_tag::bivalent: return "bivalent";
    case valency_tag::undecided: return "undecided";
    }
    return "?";
}

valency_graph build_valency_graph(const algorithm& alg, std::size_t budget) {
    require_three_processes(alg);
    valency_graph vg;
    vg.g = build_configuration_graph(alg, budget);
    const std::size_t n = vg.g.nodes.size();
    vg.decides0.assign(n, false);
    vg.decides1.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        auto dec = decided_values(alg, vg.g.nodes[i]);
        vg.decides0[i] = dec.count("0") > 0;
        vg.decides1[i] = dec.count("1") > 0;
    }
    auto reach0 = observer_reaches(vg.g, vg.decides0);
    auto reach1 = observer_reaches(vg.g, vg.decides1);
    vg.tags.assign(n, valency_tag::undecided);
    for (std::size_t i = 0; i < n; ++i) {
        if (reach0[i] && reach1[i]) vg.tags[i] = valency_tag::bivalent;
        else if (reach0[i]) vg.tags[i] = valency_tag::zero_valent;
        else if (reach1[i]) vg.tags[i] = valency_tag::one_valent;
    }
    return vg;
}

bool is_deciding(const valency_graph& vg, int node, const std::string& v) {
    if (v == "0") return vg.decides0.at(node);
    if (v == "1") return vg.decides1.at(node);
    return false;
}

valency_tag valency(const valency_graph& vg, int node) { return vg.tags.at(node); }

safety_report check_safety(const algorithm& alg, const valency_graph& vg) {
    safety_report rep;
    std::set<std::string> proposed;
    for (int p = 0; p < alg.process_count(); ++p) proposed.insert(alg.proc(p).input_value);
    for (std::size_t i = 0; i < vg.g.nodes.size(); ++i) {
        if (vg.decides0[i] && vg.decides1[i]) {
            rep.ok = false;
            rep.violation = "agreement: configuration with both 0 and 1 decided";
            rep.witness = vg.g.path_from_root(static_cast<int>(i));
            return rep;
        }
        auto dec = decided_values(alg, vg.g.nodes[i]);
        for (const auto& v : dec)
            if (!proposed.count(v)) {
                rep.ok = false;
                rep.violation = "validity: decided value " + v + " was never proposed";
                rep.witness = vg.g.path_from_root(static_cast<int>(i));
                return rep;
            }
    }
    // disagreement along a path is impossible once no single node carries two
    // decisions (responses are sticky), but cross-check histories anyway
    auto obj = builtin_object(alg.object_name());
    if (obj) {
        std::mt19937 rng(20);
        for (int t = 0; t < 24; ++t) {
            schedule s;
            for (int i = 0; i < 28; ++i) s.push_back(static_cast<int>(rng() % 3));
            auto run = alg.run(alg.initial_configuration(), s);
            auto h = collect_history(alg, run.trace);
            if (!is_linearizable(h, *obj).linearizable) {
                rep.ok = false;
                rep.violation = "linearizability: sampled history rejected";
                rep.witness = s;
                return rep;
            }
        }
    }
    return rep;
}

premise_report check_solo_termination(const algorithm& alg) {
    require_three_processes(alg);
    premise_report rep{"solo-termination", false, ""};
    configuration c = alg.initial_configuration();
    // p0 runs alone; the graph is finite, so either it halts or it cycles
    std::set<configuration> seen;
    while (!alg.halted(c, 0)) {
        if (!seen.insert(c).second) {
            rep.detail = "p0 solo run cycles without deciding";
            return rep;
        }
        c = alg.apply_step(c, 0);
    }
    const auto& pr = alg.proc(0);
    if (pr.resp_count[c.local[0]] == 0) {
        rep.detail = "p0 halts solo without responding";
        return rep;
    }
    std::string v = *pr.last_response[c.local[0]];
    if (v != pr.input_value) {
        rep.detail = "p0 solo decides " + v + " instead of its own proposal " + pr.input_value;
        return rep;
    }
    rep.ok = true;
    rep.detail = "p0 solo decides " + v;
    return rep;
}

premise_report check_root_one_valent(const algorithm& alg, const valency_graph& vg,
                                     std::size_t budget) {
    premise_report rep{"root-one-valent", false, ""};
    if (vg.tags[vg.g.root()] != valency_tag::one_valent) {
        rep.detail = "root tagged " + to_string(vg.tags[vg.g.root()]);
        return rep;
    }
    // indistinguishability bridge: replay every {p1,p2}-only edge of this
    // graph inside the all-ones graph; endpoints must stay indistinguishable
    // to the observers, so Validity there forbids a 0-decision here
    std::map<std::string, std::string> ones;
    for (int p = 0; p < 3; ++p) ones[alg.proc(p).name] = "1";
    algorithm alg1 = alg.with_inputs(ones);
    std::vector<std::optional<configuration>> twin(vg.g.nodes.size());
    twin[0] = alg1.initial_configuration();
    const std::set<int> observers{kObserver1, kObserver2};
    std::deque<int> work{0};
    std::size_t bridged = 0;
    while (!work.empty()) {
        int n = work.front();
        work.pop_front();
        for (int p : {kObserver1, kObserver2}) {
            int s = vg.g.successor(n, p);
            if (s < 0 || twin[s]) continue;
            if (alg1.halted(*twin[n], p)) {
                rep.detail = "bridge: twin of p" + std::to_string(p) + " halted early";
                return rep;
            }
            twin[s] = alg1.apply_step(*twin[n], p);
            if (!indistinguishable(vg.g.nodes[s], *twin[s], observers)) {
                rep.detail = "bridge: {p1,p2}-reachable configuration distinguishable "
                             "from its all-ones twin";
                return rep;
            }
            auto dec = decided_values(alg1, *twin[s]);
            if (dec.count("0")) {
                rep.detail = "bridge: all-ones twin decides 0 (validity violation there)";
                return rep;
            }
            ++bridged;
            work.push_back(s);
        }
    }
    (void)budget;
    rep.ok = true;
    rep.detail = "no {p1,p2}-only path decides 0; bridge covered " + std::to_string(bridged) +
                 " twin configurations";
    return rep;
}

bivalent_search find_bivalent(const algorithm& alg, const valency_graph& vg) {
    bivalent_search out;
    out.premise = check_solo_termination(alg);
    for (std::size_t i = 0; i < vg.g.nodes.size(); ++i)
        if (vg.tags[i] == valency_tag::bivalent) {
            out.node = static_cast<int>(i);
            out.path = vg.g.path_from_root(static_cast<int>(i));
            return out;
        }
    return out;
}

std::optional<std::pair<int, int>> extend_bivalent(const valency_graph& vg, int node) {
    if (vg.tags.at(node) != valency_tag::bivalent)
        throw usage_error("extend_bivalent requires a bivalent configuration");
    for (int p : {kObserver1, kObserver2}) {
        int s = vg.g.successor(node, p);
        if (s >= 0 && vg.tags[s] == valency_tag::bivalent) return std::make_pair(p, s);
    }
    return std::nullopt;
}

premise_report check_bivalent_extension(const valency_graph& vg) {
    premise_report rep{"bivalent-extension", true, ""};
    std::size_t bivalent = 0;
    for (std::size_t i = 0; i < vg.g.nodes.size(); ++i) {
        if (vg.tags[i] != valency_tag::bivalent) continue;
        ++bivalent;
        if (!extend_bivalent(vg, static_cast<int>(i))) {
            rep.ok = false;
            rep.detail = "bivalent configuration with no bivalent {p1,p2} successor";
            return rep;
        }
    }
    rep.detail = std::to_string(bivalent) + " bivalent configurations, all extensible";
    return rep;
}

refutation construct_refutation(const algorithm& alg, std::size_t budget) {
    require_three_processes(alg);
    refutation out;
    for (int p = 0; p < 3; ++p) {
        const std::string& v = alg.proc(p).input_value;
        std::string want = p == 0 ? "0" : "1";
        if (v != want) {
            out.diagnosis = "refutation requires the input vector (0,1,1)";
            return out;
        }
    }
    auto vg = build_valency_graph(alg, budget);
    out.stats.states = vg.g.nodes.size();
    out.stats.edges = vg.g.edge_count;

    auto safety = check_safety(alg, vg);
    out.premises.push_back({"safety", safety.ok, safety.ok ? "agreement, validity, sampled "
                                                             "linearizability"
                                                           : safety.violation});
    if (!safety.ok) {
        out.diagnosis = "safety premise failed: " + safety.violation;
        return out;
    }
    auto solo = check_solo_termination(alg);
    out.premises.push_back(solo);
    if (!solo.ok) {
        out.diagnosis = "solo-termination premise failed: " + solo.detail;
        return out;
    }
    auto lemma2 = check_root_one_valent(alg, vg, budget);
    out.premises.push_back(lemma2);
    if (!lemma2.ok) {
        out.diagnosis = "root valency check failed: " + lemma2.detail;
        return out;
    }
    auto search = find_bivalent(alg, vg);
    out.premises.push_back({"bivalent-reachable", search.node.has_value(),
                            search.node ? "bivalent configuration found"
                                        : "no bivalent configuration reachable"});
    if (!search.node) {
        out.diagnosis = "no bivalent configuration reachable from the root";
        return out;
    }
    auto lemma4 = check_bivalent_extension(vg);
    out.premises.push_back(lemma4);
    if (!lemma4.ok) {
        out.diagnosis = "bivalent extension failed: " + lemma4.detail;
        return out;
    }

    // walk bivalent extensions until a configuration repeats
    schedule prefix = search.path;
    schedule walk;
    std::map<int, std::size_t> seen; // node -> position in walk
    int cur = *search.node;
    seen[cur] = 0;
    while (true) {
        auto next = extend_bivalent(vg, cur);
        if (!next) {
            out.diagnosis = "bivalent walk stuck (contradicts the extension scan)";
            return out;
        }
        walk.push_back(next->first);
        cur = next->second;
        auto it = seen.find(cur);
        if (it != seen.end()) {
            prefix.insert(prefix.end(), walk.begin(), walk.begin() + it->second);
            schedule cycle(walk.begin() + it->second, walk.end());
            auto l = make_lasso(alg, prefix, cycle);
            if (!l) {
                out.diagnosis = "refutation cycle failed to close";
                return out;
            }
            out.l = *l;
            break;
        }
        seen[cur] = walk.size();
    }
    out.bivalent_path = search.path;

    // verify the witness: observer-only decision-free cycle, both pending
    // proposals conflict-step-contention free yet never completing
    if (!is_p_only(out.l.cycle, {kObserver1, kObserver2})) {
        out.diagnosis = "witness cycle contains p0 steps";
        return out;
    }
    {
        configuration c = out.l.anchor;
        for (int p : out.l.cycle) {
            if (!decided_values(alg, c).empty()) {
                out.diagnosis = "witness cycle passes through a deciding configuration";
                return out;
            }
            c = alg.apply_step(c, p);
        }
    }
    auto cr = derive_conflict_relation(binary_consensus_object());
    for (int p : {kObserver1, kObserver2}) {
        if (instance_completes_in(alg, out.l, p, 0)) {
            out.diagnosis = "pending proposal completes inside the witness";
            return out;
        }
        if (!eventually_conflict_scf(alg, out.l, p, 0, cr)) {
            out.diagnosis = "pending proposal is not eventually conflict-SCF";
            return out;
        }
    }
    // cross-oracle agreement with the progress checker
    auto verdict = find_violation(alg, progress_condition::conflict_obstruction_free, cr, budget);
    if (verdict.holds) {
        out.diagnosis = "progress checker disagrees: COF reported to hold";
        return out;
    }
    out.ok = true;
    return out;
}

std::string export_valency_dot(const valency_graph& vg, std::size_t max_nodes) {
    std::ostringstream os;
    os << "digraph valency {\n  rankdir=LR;\n  node [style=filled];\n";
    os << "  legend_0 [label=\"0-valent\", fillcolor=lightcoral];\n";
    os << "  legend_1 [label=\"1-valent\", fillcolor=lightblue];\n";
    os << "  legend_b [label=\"bivalent\", fillcolor=palegreen];\n";
    std::size_t n = std::min(vg.g.nodes.size(), max_nodes);
    for (std::size_t i = 0; i < n; ++i) {
        const char* color = "white";
        switch (vg.tags[i]) {
        case valency_tag::zero_valent: color = "lightcoral"; break;
        case valency_tag::one_valent: color = "lightblue"; break;
        case valency_tag::bivalent: color = "palegreen"; break;
        case valency_tag::undecided: color = "lightgray"; break;
        }
        os << "  n" << i << " [label=\"" << i << "\", fillcolor=" << color << "];\n";
    }
    for (std::size_t i = 0; i < n; ++i)
        for (int p = 0; p < vg.g.nprocs; ++p) {
            int s = vg.g.successor(static_cast<int>(i), p);
            if (s < 0 || static_cast<std::size_t>(s) >= n) continue;
            bool critical = vg.tags[i] == valency_tag::bivalent &&
                            (vg.tags[s] == valency_tag::zero_valent ||
                             vg.tags[s] == valency_tag::one_valent);
            os << "  n" << i << " -> n" << s << " [label=\"p" << p << "\"";
            if (critical) os << ", color=red, penwidth=2";
            os << "];\n";
        }
    os << "}\n";
    return os.str();
}

} // namespace cofcheck
