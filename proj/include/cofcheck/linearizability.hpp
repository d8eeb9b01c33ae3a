#pragma once

#include "cofcheck/history.hpp"
#include "cofcheck/object.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cofcheck {

// One linearized operation in a witness order.
struct linearization_point {
    std::string process;
    std::string operation;
    std::string response;
    bool was_pending = false; // completed by the linearization, not observed
};

struct linearization_result {
    bool linearizable = false;
    std::vector<linearization_point> witness; // present iff linearizable
    // On failure: the longest event-prefix of the history that is
    // linearizable, for debugging.
    std::size_t linearizable_prefix_events = 0;
};

// Decides linearizability of h against obj: a total order of all completed
// operations (plus any subset of pending ones) extending real-time order
// whose sequential application from q0 reproduces every observed response.
// Exhaustive search with memoized (state, linearized-set) pruning; meant for
// desk-scale histories (<= ~12 operations).
linearization_result is_linearizable(const history& h, const sequential_object& obj);

} // namespace cofcheck
