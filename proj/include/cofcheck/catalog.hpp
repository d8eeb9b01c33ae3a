#pragma once

#include "cofcheck/execution.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cofcheck {

// What an algorithm claims about itself; every claim is discharged by the
// corresponding checker in the acceptance suite.
struct algorithm_manifest {
    std::string name;
    std::string object;
    int processes = 0;
    bool linearizable = false;
    // condition name ("wf" | "of" | "cof") -> expected verdict; conditions not
    // listed are unclaimed (e.g. replay-only scenarios)
    std::map<std::string, bool> progress;
    std::map<std::string, std::vector<std::string>> input_domains; // process -> values
};

struct catalog_entry {
    algorithm_manifest manifest;
    algorithm_spec spec;
};

// Two-process binary consensus over single-writer preference and flag
// registers: fast path on an unset opposing preference, flag-parity duel on
// disagreement. Wait-free when the inputs agree, livelocks (by design) only
// under contention between conflicting proposals.
algorithm_spec cons2_spec();

// Three-process round-based commit/adopt candidate: each pair of processes
// shares a lock made of candidacy flags, four-phase hold marks, and a turn
// register, and each process announces its claim on a decision board before
// taking its locks one at a time. Rounds that lose a lock to a conflicting
// claim adopt the opposite value, while same-value rounds back off and trade
// the turn. Safe and obstruction-free on every input vector; not
// conflict-obstruction-free (equal proposals can trade turns forever), and
// therefore not wait-free.
algorithm_spec cons3_spec();

// Three-process counter from single-writer registers: each incrementer bumps
// its own cell (two instances each), the reader sums the cells.
algorithm_spec counter_swsr_spec();

// Counter variant with endlessly repeating two-step increments, used for the
// lasso replay scenario below.
algorithm_spec figure1_spec();

std::vector<catalog_entry> reference_catalog();

// The shared-counter scenario: the reader samples one cell and crashes; the
// two incrementers keep alternating. Instance boundaries are staggered so
// every increment responds, yet the instance opened inside the cycle only
// completes in the next unrolling.
struct figure1_bundle {
    algorithm_spec spec;
    lasso l;
    int reader_process = 0;
    // instances completing within prefix . cycle
    std::vector<std::pair<int, int>> completing_incs;
    // instances opened in the cycle: not eventually step-contention free,
    // but eventually conflict-step-contention free
    std::vector<std::pair<int, int>> straddling_incs;
};
figure1_bundle figure1_scenario();

} // namespace cofcheck
