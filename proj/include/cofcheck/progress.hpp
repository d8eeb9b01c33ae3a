#pragma once

#include "cofcheck/execution.hpp"
#include "cofcheck/graph.hpp"
#include "cofcheck/object.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cofcheck {

enum class progress_condition { wait_free, obstruction_free, conflict_obstruction_free };

std::string to_string(progress_condition c);
std::optional<progress_condition> parse_progress_condition(const std::string& s);

// ---------------------------------------------------------------------------
// Lasso classification.

// Replay of a lasso: the prefix from the initial configuration, then two
// unrollings of the cycle from the anchor. Two unrollings are enough to see
// every instance the infinite execution ever starts, because the per-cycle
// response pattern is periodic from the anchor on.
struct lasso_replay {
    std::vector<algorithm::trace_entry> prefix;
    std::vector<algorithm::trace_entry> cycle;  // first unrolling
    std::vector<algorithm::trace_entry> cycle2; // second unrolling
    std::vector<int> anchor_resp;               // completed instances per process at the anchor
};

// Throws usage_error when the prefix does not reach the anchor or the cycle
// does not close on it.
lasso_replay replay_lasso(const algorithm& alg, const lasso& l);

struct instance_status {
    int process = -1;
    int instance = -1;
    std::string op;
    std::optional<int> completed_at; // step index within prefix . cycle, or none
    bool steps_in_cycle = false;
    bool conflicting_steps_in_cycle = false; // steps in the cycle of a conflicting
                                             // instance with a different invoker
};

// Status of every instance that takes a step in prefix . cycle, ordered by
// first step.
std::vector<instance_status> instance_statuses(const algorithm& alg, const lasso& l,
                                               const conflict_relation& cr);

// True iff instance k of process p emits its response within prefix . cycle.
bool instance_completes_in(const algorithm& alg, const lasso& l, int p, int k);

// True iff instance k of process p completes in prefix . cycle, or the cycle
// contains steps of no other instance. Throws usage_error when the instance
// never takes a step in the replayed execution.
bool eventually_scf(const algorithm& alg, const lasso& l, int p, int k);

// True iff the instance completes, or no conflicting instance with a
// different invoker takes steps in the cycle.
bool eventually_conflict_scf(const algorithm& alg, const lasso& l, int p, int k,
                             const conflict_relation& cr);

// True iff p takes a step in the cycle, or p has no pending (invoked but
// unanswered) instance at the anchor.
bool correct_in(const algorithm& alg, const lasso& l, int p);

// ---------------------------------------------------------------------------
// Whole-algorithm verdicts.

struct progress_stats {
    std::size_t states = 0;
    std::size_t edges = 0;
    std::size_t scc_count = 0;
};

struct progress_witness {
    lasso l;
    int process = -1;
    int instance = -1;
    std::string op;
};

struct progress_verdict {
    progress_condition condition;
    bool holds = true;
    std::optional<progress_witness> witness; // present iff !holds
    progress_stats stats;
};

inline constexpr std::size_t default_state_budget = 10'000'000;

// Exhaustive search for a reachable cycle C and pending instance Phi such
// that Phi's invoker steps in C, Phi never completes in C, and the
// condition's contention predicate holds along C (wait-free: none;
// obstruction-free: only Phi's steps; conflict-obstruction-free: no steps of
// conflicting instances by other processes). Witnesses are re-verified by
// replay before being returned. Throws budget_error past the state budget.
progress_verdict find_violation(const algorithm& alg, progress_condition condition,
                                const conflict_relation& cr,
                                std::size_t budget = default_state_budget, int threads = 1);

} // namespace cofcheck
