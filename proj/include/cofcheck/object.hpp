#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace cofcheck {

// A deterministic sequential object: finite state set, initial state, finite
// operation and response sets, and a total transition function
// (operation, state) -> (response, next state).
struct sequential_object {
    std::string name;
    std::vector<std::string> states;
    std::string initial_state;
    std::vector<std::string> operations;
    std::vector<std::string> responses;
    // keyed by (operation, state)
    std::map<std::pair<std::string, std::string>, std::pair<std::string, std::string>> transition;

    // Throws spec_error if the table is not total or references unknown ids.
    void validate() const;

    bool has_state(const std::string& q) const;
    bool has_operation(const std::string& o) const;

    // One application of the transition function. Throws spec_error on
    // unknown operation or state.
    std::pair<std::string, std::string> step(const std::string& op, const std::string& q) const;
};

// Unordered operation pairs that fail to commute in some state. Pairs are
// stored with components sorted, which makes symmetry structural.
struct conflict_relation {
    std::set<std::pair<std::string, std::string>> pairs;

    bool conflicts(const std::string& a, const std::string& b) const;
    bool empty() const { return pairs.empty(); }
};

struct sequence_result {
    std::vector<std::string> responses;
    std::string final_state;
};

// Applies s left to right starting from q, returning every response and the
// final state s(q).
sequence_result apply_sequence(const sequential_object& obj, const std::string& q,
                               const std::vector<std::string>& s);

// True iff o.o' and o'.o applied at q agree on the final state and each
// operation gets the same response in both orders.
bool commute_in_state(const sequential_object& obj, const std::string& o,
                      const std::string& o2, const std::string& q);

// Derives the conflict relation by quantifying over all states in Q.
conflict_relation derive_conflict_relation(const sequential_object& obj);

// Same derivation, but also reports one witness state per conflicting pair.
std::map<std::pair<std::string, std::string>, std::string>
conflict_witnesses(const sequential_object& obj);

// Builtin objects.
sequential_object binary_consensus_object();
sequential_object bounded_counter_object(int cap); // states 0..cap, ops {read, inc}
sequential_object total_conflict_register_object(); // pairwise-conflicting writes
sequential_object commuting_only_object();          // single idempotent-ish op set, empty relation

std::vector<sequential_object> builtin_objects();
std::optional<sequential_object> builtin_object(const std::string& name);

} // namespace cofcheck
