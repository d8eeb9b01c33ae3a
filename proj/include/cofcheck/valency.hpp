#pragma once

#include "cofcheck/execution.hpp"
#include "cofcheck/graph.hpp"
#include "cofcheck/object.hpp"
#include "cofcheck/progress.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cofcheck {

// Valency of a configuration with respect to {p1,p2}-only reachability:
// v-valent when no {p1,p2}-only path reaches a decision of the other value,
// bivalent when both decisions stay reachable. A subgraph from which no
// decision is reachable at all satisfies both one-sided definitions
// vacuously; such nodes are tagged `undecided` and excluded from the
// bivalence-extension assertions.
enum class valency_tag { zero_valent, one_valent, bivalent, undecided };

std::string to_string(valency_tag t);

// Reachable-configuration graph of a 3-process binary consensus candidate,
// annotated per node with the decided values and the valency tag.
struct valency_graph {
    configuration_graph g;
    std::vector<bool> decides0, decides1; // per node: some process decided v
    std::vector<valency_tag> tags;
};

// Builds the full graph (all processes) and tags every node. The analyzer is
// specific to the 3-process binary-consensus instance; other arities are a
// usage error.
valency_graph build_valency_graph(const algorithm& alg,
                                  std::size_t budget = default_state_budget);

bool is_deciding(const valency_graph& vg, int node, const std::string& v);
valency_tag valency(const valency_graph& vg, int node);

// Agreement + Validity over every reachable node, plus linearizability of
// histories sampled from random maximal paths.
struct safety_report {
    bool ok = true;
    std::string violation;     // empty when ok
    schedule witness;          // path from the root to the violating node
};
safety_report check_safety(const algorithm& alg, const valency_graph& vg);

// Premise checks the impossibility argument relies on; reported rather than
// assumed so a candidate that fails one is diagnosed, not misclassified.
struct premise_report {
    std::string name;
    bool ok = false;
    std::string detail;
};

// Solo run of p0 from the root: must decide 0 under inputs (0,1,1).
premise_report check_solo_termination(const algorithm& alg);

// No {p1,p2}-only path from the root decides 0 (the root is 1-valent),
// checked directly on the tags and via the indistinguishability bridge to
// the (1,1,1) graph: every {p1,p2}-only edge of the (0,1,1) graph has a
// twin edge in the (1,1,1) graph whose endpoints are indistinguishable to
// {p1,p2}, so a 0-decision here would violate Validity there.
premise_report check_root_one_valent(const algorithm& alg, const valency_graph& vg,
                                     std::size_t budget = default_state_budget);

// First bivalent node in BFS order with its path from the root, or none
// (then `premise` names what failed instead).
struct bivalent_search {
    std::optional<int> node;
    schedule path;
    premise_report premise; // solo-termination report used for the diagnosis
};
bivalent_search find_bivalent(const algorithm& alg, const valency_graph& vg);

// A {p1,p2} step from a bivalent node whose successor is bivalent;
// deterministic tie-break prefers p1. Empty when no such step exists (a
// counterexample to the Lemma-4 scan).
std::optional<std::pair<int, int>> extend_bivalent(const valency_graph& vg, int node);

// Exhaustive Lemma-4 scan: every bivalent node has a bivalent {p1,p2}
// successor.
premise_report check_bivalent_extension(const valency_graph& vg);

// The full Theorem-1 pipeline on inputs (0,1,1): safety, premises, a path to
// a bivalent node, then repeated bivalent extension until a configuration
// repeats. The repeated segment is the cycle of the refutation lasso, which
// is re-verified ({p1,p2}-only, decision-free, both pending proposals
// eventually conflict-step-contention free yet never completing) and
// cross-checked against the progress-checker's COF verdict.
struct refutation {
    bool ok = false;
    std::vector<premise_report> premises;
    std::string diagnosis; // empty on success
    lasso l;
    schedule bivalent_path; // root -> first bivalent node
    progress_stats stats;
};
refutation construct_refutation(const algorithm& alg,
                                std::size_t budget = default_state_budget);

// DOT rendering of the tagged graph: nodes colored by tag, critical steps
// (edge from a bivalent node to a univalent node) highlighted. Intended for
// small graphs or for the neighborhood of the refutation path.
std::string export_valency_dot(const valency_graph& vg, std::size_t max_nodes = 2000);

} // namespace cofcheck
