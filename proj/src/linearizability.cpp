#include "cofcheck/linearizability.hpp"

#include "cofcheck/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <unordered_set>

namespace cofcheck {

namespace {

struct call {
    std::string process;
    std::string op;
    std::optional<std::string> response;
    std::size_t inv_index = 0;
    std::size_t res_index = std::numeric_limits<std::size_t>::max();
    bool completed() const { return response.has_value(); }
};

std::vector<call> extract_calls(const history& h) {
    h.validate();
    std::vector<call> calls;
    std::map<std::string, std::size_t> open; // process -> index into calls
    for (std::size_t i = 0; i < h.events.size(); ++i) {
        const auto& e = h.events[i];
        if (e.k == history_event::kind::invocation) {
            call c;
            c.process = e.process;
            c.op = e.value;
            c.inv_index = i;
            open[e.process] = calls.size();
            calls.push_back(std::move(c));
        } else {
            auto& c = calls[open.at(e.process)];
            c.response = e.value;
            c.res_index = i;
        }
    }
    return calls;
}

struct searcher {
    const sequential_object& obj;
    const std::vector<call>& calls;
    std::map<std::string, int> state_index;
    std::uint32_t completed_mask = 0;
    // (state, linearized-set) pairs already known to fail
    std::unordered_set<std::uint64_t> dead;
    std::vector<linearization_point> witness;

    searcher(const sequential_object& o, const std::vector<call>& cs) : obj(o), calls(cs) {
        for (std::size_t i = 0; i < obj.states.size(); ++i)
            state_index[obj.states[i]] = static_cast<int>(i);
        for (std::size_t i = 0; i < calls.size(); ++i)
            if (calls[i].completed()) completed_mask |= 1u << i;
    }

    bool minimal(std::size_t c, std::uint32_t done) const {
        // c may be linearized next iff no unlinearized call returned before
        // c was invoked.
        for (std::size_t d = 0; d < calls.size(); ++d) {
            if (d == c || (done >> d) & 1u) continue;
            if (calls[d].res_index < calls[c].inv_index) return false;
        }
        return true;
    }

    bool search(const std::string& q, std::uint32_t done) {
        if ((done & completed_mask) == completed_mask) return true;
        std::uint64_t key = (static_cast<std::uint64_t>(state_index.at(q)) << 32) | done;
        if (dead.count(key)) return false;
        for (std::size_t c = 0; c < calls.size(); ++c) {
            if ((done >> c) & 1u) continue;
            if (!calls[c].completed() ) continue; // pending handled below
            if (!minimal(c, done)) continue;
            auto [resp, q2] = obj.step(calls[c].op, q);
            if (resp != *calls[c].response) continue;
            if (search(q2, done | (1u << c))) {
                witness.push_back({calls[c].process, calls[c].op, resp, false});
                return true;
            }
        }
        // Pending operations may be linearized with whatever response the
        // object assigns, or dropped entirely.
        for (std::size_t c = 0; c < calls.size(); ++c) {
            if ((done >> c) & 1u) continue;
            if (calls[c].completed()) continue;
            if (!minimal(c, done)) continue;
            auto [resp, q2] = obj.step(calls[c].op, q);
            if (search(q2, done | (1u << c))) {
                witness.push_back({calls[c].process, calls[c].op, resp, true});
                return true;
            }
        }
        dead.insert(key);
        return false;
    }
};

bool decide(const history& h, const sequential_object& obj, std::vector<linearization_point>* wit) {
    auto calls = extract_calls(h);
    if (calls.size() > 25)
        throw usage_error("is_linearizable: history too long for exhaustive checking");
    for (const auto& c : calls) {
        if (!obj.has_operation(c.op))
            throw spec_error("history references unknown operation '" + c.op + "'");
        if (c.response && std::find(obj.responses.begin(), obj.responses.end(), *c.response) ==
                              obj.responses.end())
            throw spec_error("history references unknown response '" + *c.response + "'");
    }
    searcher s(obj, calls);
    if (!s.search(obj.initial_state, 0)) return false;
    if (wit) {
        *wit = std::move(s.witness);
        std::reverse(wit->begin(), wit->end());
    }
    return true;
}

} // namespace

linearization_result is_linearizable(const history& h, const sequential_object& obj) {
    linearization_result out;
    out.linearizable = decide(h, obj, &out.witness);
    if (out.linearizable) {
        out.linearizable_prefix_events = h.events.size();
        return out;
    }
    out.witness.clear();
    // Longest linearizable event-prefix, for diagnosis.
    for (std::size_t k = h.events.size(); k-- > 0;) {
        history prefix;
        prefix.events.assign(h.events.begin(), h.events.begin() + k);
        if (decide(prefix, obj, nullptr)) {
            out.linearizable_prefix_events = k;
            break;
        }
    }
    return out;
}

} // namespace cofcheck
