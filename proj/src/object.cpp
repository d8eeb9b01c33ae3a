#include "cofcheck/object.hpp"

#include "cofcheck/errors.hpp"

#include <algorithm>

namespace cofcheck {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

std::pair<std::string, std::string> ordered(const std::string& a, const std::string& b) {
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

} // namespace

void sequential_object::validate() const {
    if (states.empty()) throw spec_error("object '" + name + "': empty state set");
    if (!contains(states, initial_state))
        throw spec_error("object '" + name + "': initial state '" + initial_state + "' not in Q");
    for (const auto& o : operations) {
        for (const auto& q : states) {
            auto it = transition.find({o, q});
            if (it == transition.end())
                throw spec_error("object '" + name + "': transition undefined for (" + o + ", " + q + ")");
            const auto& [r, q2] = it->second;
            if (!contains(responses, r))
                throw spec_error("object '" + name + "': unknown response '" + r + "'");
            if (!contains(states, q2))
                throw spec_error("object '" + name + "': unknown target state '" + q2 + "'");
        }
    }
    for (const auto& [key, val] : transition) {
        if (!contains(operations, key.first))
            throw spec_error("object '" + name + "': transition for unknown operation '" + key.first + "'");
        if (!contains(states, key.second))
            throw spec_error("object '" + name + "': transition from unknown state '" + key.second + "'");
        (void)val;
    }
}

bool sequential_object::has_state(const std::string& q) const { return contains(states, q); }
bool sequential_object::has_operation(const std::string& o) const { return contains(operations, o); }

std::pair<std::string, std::string> sequential_object::step(const std::string& op,
                                                            const std::string& q) const {
    auto it = transition.find({op, q});
    if (it == transition.end())
        throw spec_error("object '" + name + "': no transition for (" + op + ", " + q + ")");
    return it->second;
}

bool conflict_relation::conflicts(const std::string& a, const std::string& b) const {
    return pairs.count(ordered(a, b)) != 0;
}

sequence_result apply_sequence(const sequential_object& obj, const std::string& q,
                               const std::vector<std::string>& s) {
    if (!obj.has_state(q)) throw spec_error("apply_sequence: unknown state '" + q + "'");
    sequence_result out;
    out.final_state = q;
    out.responses.reserve(s.size());
    for (const auto& op : s) {
        if (!obj.has_operation(op)) throw spec_error("apply_sequence: unknown operation '" + op + "'");
        auto [r, q2] = obj.step(op, out.final_state);
        out.responses.push_back(r);
        out.final_state = q2;
    }
    return out;
}

bool commute_in_state(const sequential_object& obj, const std::string& o,
                      const std::string& o2, const std::string& q) {
    if (!obj.has_operation(o) || !obj.has_operation(o2))
        throw spec_error("commute_in_state: unknown operation");
    if (!obj.has_state(q)) throw spec_error("commute_in_state: unknown state '" + q + "'");
    auto fwd = apply_sequence(obj, q, {o, o2});
    auto rev = apply_sequence(obj, q, {o2, o});
    // fwd order: o then o2; rev order: o2 then o. Match responses per operation.
    return fwd.final_state == rev.final_state && fwd.responses[0] == rev.responses[1] &&
           fwd.responses[1] == rev.responses[0];
}

conflict_relation derive_conflict_relation(const sequential_object& obj) {
    conflict_relation cr;
    for (const auto& [pair, q] : conflict_witnesses(obj)) {
        (void)q;
        cr.pairs.insert(pair);
    }
    return cr;
}

std::map<std::pair<std::string, std::string>, std::string>
conflict_witnesses(const sequential_object& obj) {
    obj.validate();
    std::map<std::pair<std::string, std::string>, std::string> out;
    for (std::size_t i = 0; i < obj.operations.size(); ++i) {
        for (std::size_t j = i; j < obj.operations.size(); ++j) {
            const auto& o = obj.operations[i];
            const auto& o2 = obj.operations[j];
            for (const auto& q : obj.states) {
                if (!commute_in_state(obj, o, o2, q)) {
                    out.emplace(ordered(o, o2), q);
                    break;
                }
            }
        }
    }
    return out;
}

sequential_object binary_consensus_object() {
    sequential_object obj;
    obj.name = "binary-consensus";
    obj.states = {"bot", "0", "1"};
    obj.initial_state = "bot";
    obj.operations = {"propose(0)", "propose(1)"};
    obj.responses = {"0", "1"};
    // The first propose fixes the state to its argument; later proposes
    // return the established value without modifying it.
    for (const std::string v : {"0", "1"}) {
        obj.transition[{"propose(" + v + ")", "bot"}] = {v, v};
        obj.transition[{"propose(" + v + ")", "0"}] = {"0", "0"};
        obj.transition[{"propose(" + v + ")", "1"}] = {"1", "1"};
    }
    return obj;
}

sequential_object bounded_counter_object(int cap) {
    if (cap < 1) throw spec_error("bounded_counter: cap must be >= 1");
    sequential_object obj;
    obj.name = "bounded-counter(" + std::to_string(cap) + ")";
    for (int i = 0; i <= cap; ++i) obj.states.push_back(std::to_string(i));
    obj.initial_state = "0";
    obj.operations = {"read", "inc"};
    obj.responses.push_back("ack");
    for (int i = 0; i <= cap; ++i) obj.responses.push_back(std::to_string(i));
    for (int i = 0; i <= cap; ++i) {
        std::string q = std::to_string(i);
        // inc saturates at cap; read returns the state.
        std::string next = std::to_string(std::min(i + 1, cap));
        obj.transition[{"inc", q}] = {"ack", next};
        obj.transition[{"read", q}] = {q, q};
    }
    return obj;
}

sequential_object total_conflict_register_object() {
    // A three-valued register offering only writes of distinct values. Any
    // two distinct writes fail to commute (the final state depends on order),
    // so every distinct operation pair conflicts.
    sequential_object obj;
    obj.name = "total-conflict-register";
    obj.states = {"a", "b", "c"};
    obj.initial_state = "a";
    obj.operations = {"write(a)", "write(b)", "write(c)"};
    obj.responses = {"ack"};
    for (const std::string v : {"a", "b", "c"})
        for (const std::string q : {"a", "b", "c"})
            obj.transition[{"write(" + v + ")", q}] = {"ack", v};
    return obj;
}

sequential_object commuting_only_object() {
    // Saturating increments with a constant response: empty conflict relation.
    sequential_object obj;
    obj.name = "commuting-only";
    obj.states = {"0", "1", "2"};
    obj.initial_state = "0";
    obj.operations = {"inc"};
    obj.responses = {"ack"};
    obj.transition[{"inc", "0"}] = {"ack", "1"};
    obj.transition[{"inc", "1"}] = {"ack", "2"};
    obj.transition[{"inc", "2"}] = {"ack", "2"};
    return obj;
}

std::vector<sequential_object> builtin_objects() {
    return {binary_consensus_object(), bounded_counter_object(3), total_conflict_register_object(),
            commuting_only_object()};
}

std::optional<sequential_object> builtin_object(const std::string& name) {
    if (name == "binary-consensus") return binary_consensus_object();
    if (name == "total-conflict-register") return total_conflict_register_object();
    if (name == "commuting-only") return commuting_only_object();
    if (name.rfind("bounded-counter(", 0) == 0 && name.back() == ')') {
        int cap = std::stoi(name.substr(16, name.size() - 17));
        return bounded_counter_object(cap);
    }
    return std::nullopt;
}

} // namespace cofcheck
