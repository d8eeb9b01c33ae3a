#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cofcheck {

enum class mem_action : std::uint8_t { read, write };

// ---------------------------------------------------------------------------
// Declarative algorithm description (what the spec files contain).

struct register_decl {
    std::string id;
    std::vector<std::string> domain;
    std::string initial;
};

struct pending_action_spec {
    mem_action action;
    std::string reg;
    std::string value; // write value; ignored for reads
};

// The per-input-value part of a process: where it starts and which high-level
// operation instances it performs, in order. With repeat=true the sequence
// restarts after its last instance (used for replay-only scenarios).
struct input_case_spec {
    std::string initial_state;
    std::vector<std::string> operations;
    bool repeat = false;
};

struct process_spec {
    std::string name;
    std::vector<std::string> local_states;
    std::map<std::string, input_case_spec> inputs;                      // input value -> case
    std::map<std::string, pending_action_spec> pending;                 // state -> action; absent = halted
    std::map<std::string, std::map<std::string, std::string>> on_read;  // state -> value -> next state
    std::map<std::string, std::string> on_write;                        // state -> next state
    std::map<std::string, std::string> response;                        // entering state emits response
};

struct algorithm_spec {
    std::string name;
    std::string object; // name of the implemented sequential object
    std::vector<register_decl> registers;
    std::vector<process_spec> processes;
    std::map<std::string, std::string> inputs; // process name -> input value
};

// ---------------------------------------------------------------------------
// Configurations and steps.

struct configuration {
    std::vector<int> local; // per process: local state index
    std::vector<int> mem;   // per register: value index

    bool operator==(const configuration&) const = default;
    bool operator<(const configuration& o) const {
        return local != o.local ? local < o.local : mem < o.mem;
    }
};

struct configuration_hash {
    std::size_t operator()(const configuration& c) const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](int v) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        };
        for (int v : c.local) mix(v);
        for (int v : c.mem) mix(v);
        return static_cast<std::size_t>(h);
    }
};

struct step_info {
    int process;
    int reg;
    mem_action action;
    bool operator==(const step_info&) const = default;
};

// A schedule is a list of process indices; the steps themselves follow from
// determinism.
using schedule = std::vector<int>;

// Finite representation of an infinite execution: prefix . cycle^omega.
struct lasso {
    schedule prefix;
    schedule cycle;
    configuration anchor; // configuration after the prefix; cycle closes on it
};

// ---------------------------------------------------------------------------
// Compiled algorithm: indexed, validated, executable.

class algorithm {
public:
    struct compiled_action {
        mem_action action;
        int reg;
        int value; // write value index
    };

    struct process {
        std::string name;
        std::vector<std::string> state_names;
        std::vector<std::optional<compiled_action>> pending; // by state; nullopt = halted
        std::vector<std::vector<int>> on_read;               // [state][value idx] -> next
        std::vector<int> on_write;                           // [state] -> next, -1 if n/a
        std::vector<std::optional<std::string>> response;    // emitted on entering state
        int initial_state = -1;
        std::vector<std::string> op_sequence;
        bool repeat_ops = false;
        std::string input_value;
        // Responses emitted on any path from the initial state to each state.
        // Valid only when annotation_consistent (acyclic instance structure).
        std::vector<int> resp_count;
        std::vector<std::optional<std::string>> last_response;
        bool annotation_consistent = true;
    };

    struct reg {
        std::string id;
        std::vector<std::string> domain;
        int initial = 0;
    };

    static algorithm compile(algorithm_spec spec);

    const algorithm_spec& spec() const { return spec_; }
    const std::string& name() const { return spec_.name; }
    const std::string& object_name() const { return spec_.object; }

    int process_count() const { return static_cast<int>(procs_.size()); }
    int register_count() const { return static_cast<int>(regs_.size()); }
    const process& proc(int p) const { return procs_.at(p); }
    const reg& register_at(int r) const { return regs_.at(r); }
    int process_index(const std::string& name) const; // -1 if unknown
    int register_index(const std::string& id) const;  // -1 if unknown

    configuration initial_configuration() const;
    // Same automaton set with different proposed inputs (process name -> value).
    algorithm with_inputs(const std::map<std::string, std::string>& inputs) const;

    bool halted(const configuration& c, int p) const;
    std::optional<step_info> enabled_step(const configuration& c, int p) const;
    // Strict single-step semantics; throws usage_error on a halted process.
    configuration apply_step(const configuration& c, int p) const;

    struct trace_entry {
        int seq;
        int process;
        int reg;
        mem_action action;
        std::string value; // value read or written
        std::optional<std::string> response;
        int instance_index; // which operation instance of the process this step belongs to
        std::string op;     // that instance's operation identifier
    };
    struct run_result {
        configuration final;
        std::vector<trace_entry> trace;
    };
    // Folds apply_step over the schedule. Halted processes are skipped.
    // start_resp_counts gives per-process completed-instance counts at c
    // (empty = all zero, appropriate when c is the initial configuration).
    run_result run(const configuration& c, const schedule& s,
                   std::vector<int> start_resp_counts = {}) const;

    // The operation identifier of instance k of process p.
    std::string instance_op(int p, int k) const;
    // Number of instances of p (−1 when the sequence repeats forever).
    int instance_count(int p) const;

    // Instance index pending at c for p, or -1 if p halted. Requires a
    // consistent response annotation for p.
    int pending_instance(const configuration& c, int p) const;

    std::string register_value_name(int r, int v) const { return regs_[r].domain.at(v); }
    const std::string& local_state_name(int p, int s) const { return procs_[p].state_names.at(s); }

private:
    algorithm_spec spec_;
    std::vector<process> procs_;
    std::vector<reg> regs_;
};

// True iff memory agrees and the local states of every process in P agree.
bool indistinguishable(const configuration& a, const configuration& b, const std::set<int>& P);

bool is_p_only(const schedule& s, const std::set<int>& P);

// Closes a candidate cycle: returns a lasso (empty prefix, anchor =
// prefix_end) iff running the cycle from prefix_end takes at least one
// effective step and returns exactly to prefix_end.
std::optional<lasso> close_lasso(const algorithm& alg, const configuration& prefix_end,
                                 const schedule& candidate_cycle,
                                 std::vector<int> start_resp_counts = {});

// Runs the prefix from the initial configuration, then closes the cycle.
std::optional<lasso> make_lasso(const algorithm& alg, const schedule& prefix, const schedule& cycle);

std::string format_trace(const algorithm& alg, const std::vector<algorithm::trace_entry>& trace);

} // namespace cofcheck
