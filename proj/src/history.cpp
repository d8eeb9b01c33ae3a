#include "cofcheck/history.hpp"

#include "cofcheck/errors.hpp"

#include <map>
#include <set>
#include <sstream>

namespace cofcheck {

void history::validate() const {
    std::map<std::string, bool> pending; // process -> has open invocation
    for (const auto& e : events) {
        bool open = pending[e.process];
        if (e.k == history_event::kind::invocation) {
            if (open)
                throw spec_error("history: process '" + e.process +
                                 "' invokes while an operation is pending");
            pending[e.process] = true;
        } else {
            if (!open)
                throw spec_error("history: response without invocation for '" + e.process + "'");
            pending[e.process] = false;
        }
    }
}

history collect_history(const algorithm& alg, const std::vector<algorithm::trace_entry>& trace) {
    history h;
    std::set<std::pair<int, int>> seen; // (process, instance) already invoked
    for (const auto& e : trace) {
        if (seen.insert({e.process, e.instance_index}).second)
            h.invoke(alg.proc(e.process).name, e.op);
        if (e.response) h.respond(alg.proc(e.process).name, *e.response);
    }
    h.validate();
    return h;
}

std::string history_to_text(const history& h) {
    std::ostringstream os;
    for (const auto& e : h.events)
        os << (e.k == history_event::kind::invocation ? "INV " : "RES ") << e.process << ' '
           << e.value << '\n';
    return os.str();
}

history history_from_text(const std::string& text) {
    history h;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag, proc, value;
        if (!(ls >> tag >> proc >> value) || (tag != "INV" && tag != "RES"))
            throw spec_error("history line " + std::to_string(lineno) + ": expected 'INV p op' or 'RES p val'");
        if (tag == "INV")
            h.invoke(proc, value);
        else
            h.respond(proc, value);
    }
    h.validate();
    return h;
}

} // namespace cofcheck
