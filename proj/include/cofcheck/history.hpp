#pragma once

#include "cofcheck/execution.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cofcheck {

// Concurrent history: alternating invocation/response events per process,
// pending invocations allowed at the end.
struct history_event {
    enum class kind { invocation, response };
    kind k;
    std::string process;
    std::string value; // operation id for invocations, response value otherwise
};

struct history {
    std::vector<history_event> events;

    void validate() const; // throws spec_error on malformed alternation

    void invoke(const std::string& process, const std::string& op) {
        events.push_back({history_event::kind::invocation, process, op});
    }
    void respond(const std::string& process, const std::string& value) {
        events.push_back({history_event::kind::response, process, value});
    }
};

// One invocation per operation instance at its first step, one response at
// the step that enters a responding local state.
history collect_history(const algorithm& alg, const std::vector<algorithm::trace_entry>& trace);

// Line-oriented `INV p op` / `RES p val` records.
std::string history_to_text(const history& h);
history history_from_text(const std::string& text);

} // namespace cofcheck
